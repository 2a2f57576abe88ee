// Command-line front end; talks to the core exclusively through the shared
// C library so the CLI exercises the same surface external callers get.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgs/sgs.h"

namespace {

using nlohmann::json;

struct cli_error {
  int code;
  std::string message;
};

void check(sgs_status st) {
  if (st != SGS_OK) throw cli_error{static_cast<int>(st), sgs_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cli_error{2, "cannot read file: " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli_error{2, "cannot write file: " + path};
  out << content;
  if (!out) throw cli_error{2, "write failed: " + path};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct string_out {
  char* p = nullptr;
  ~string_out() { sgs_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using series_ptr = std::unique_ptr<sgs_series, decltype(&sgs_series_free)>;

series_ptr load_series(const std::string& path) {
  sgs_series* raw = nullptr;
  check(sgs_series_parse(read_file(path).c_str(), &raw));
  return {raw, &sgs_series_free};
}

// Largest cutoff keeping the dense eigensolve within its basis cap, capped at 64.
int auto_cutoff(int dim) {
  int k = 1;
  while (k + 1 <= 64 && std::pow(static_cast<double>(k + 2), dim) <= 20000.0) ++k;
  return k;
}

struct paths {
  std::string out_dir;
  std::string of(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
};

void print_fields(const json& j, const std::vector<std::string>& keys) {
  for (const std::string& k : keys) {
    const json& v = j.at(k);
    std::string text;
    if (v.is_null())
      text = "NA";
    else if (v.is_boolean())
      text = v.get<bool>() ? "yes" : "no";
    else if (v.is_number_float())
      text = fmt17(v.get<double>());
    else
      text = v.dump();
    std::printf("%s=%s\n", k.c_str(), text.c_str());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ground-state eigenvalue experiments for -Laplace + V on [0,1]^d"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = 1;
  paths out{"."};
  app.add_option("--seed", seed, "seed for all random streams")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker thread cap (runs are sequential)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out-dir", out.out_dir, "directory for output files")
      ->capture_default_str();

  // reference
  std::string ref_potential, ref_out = "truth.json";
  int ref_cutoff = 0;
  auto* ref = app.add_subcommand("reference", "solve the reference eigenproblem");
  ref->add_option("potential", ref_potential, "potential JSON file")->required();
  ref->add_option("--cutoff", ref_cutoff, "frequency cutoff (0 = automatic)")
      ->capture_default_str();
  ref->add_option("--out", ref_out, "output file name")->capture_default_str();

  // solve
  std::string sol_potential, sol_truth, sol_out = "solve";
  long sol_n = 1024, sol_steps = 20000;
  int sol_m = 0, sol_cutoff = 0, sol_gauss = 48;
  long sol_qmc = 131072;
  double sol_B = 0.0, sol_lr0 = 1e-2, sol_lr1 = 1e-4;
  bool sol_no_adam = false;
  auto* sol = app.add_subcommand("solve", "train one network on a potential");
  sol->add_option("potential", sol_potential, "potential JSON file")->required();
  sol->add_option("--n", sol_n, "sample count")->capture_default_str();
  sol->add_option("--m", sol_m, "network width (0 = ceil(sqrt(n)))")
      ->capture_default_str();
  sol->add_option("--B", sol_B, "coefficient budget (0 = from reference)")
      ->capture_default_str();
  sol->add_option("--steps", sol_steps, "optimizer steps")->capture_default_str();
  sol->add_option("--lr0", sol_lr0, "initial learning rate")->capture_default_str();
  sol->add_option("--lr1", sol_lr1, "final learning rate")->capture_default_str();
  sol->add_flag("--no-adam", sol_no_adam, "plain projected gradient descent");
  sol->add_option("--truth", sol_truth, "reference JSON file (else computed)");
  sol->add_option("--cutoff", sol_cutoff,
                  "reference cutoff when computed here (0 = automatic)")
      ->capture_default_str();
  sol->add_option("--gauss-order", sol_gauss, "population quadrature order, d <= 3")
      ->capture_default_str();
  sol->add_option("--qmc-count", sol_qmc, "population quadrature points, d >= 4")
      ->capture_default_str();

  // sweep
  std::string sw_potential;
  std::vector<long> sw_n_list;
  int sw_seeds = 5, sw_cutoff = 64, sw_gauss = 48;
  long sw_steps = 20000, sw_qmc = 131072;
  double sw_B = 0.0, sw_lr0 = 1e-2, sw_lr1 = 1e-4, sw_delta = 0.1;
  auto* sw = app.add_subcommand("sweep", "sample-size scaling study");
  sw->add_option("potential", sw_potential, "potential JSON file")->required();
  sw->add_option("--n-list", sw_n_list, "sample counts, increasing")
      ->required()
      ->delimiter(',');
  sw->add_option("--seeds", sw_seeds, "seeds per cell")->capture_default_str();
  sw->add_option("--cutoff", sw_cutoff, "reference cutoff")->capture_default_str();
  sw->add_option("--B", sw_B, "coefficient budget (0 = from reference)")
      ->capture_default_str();
  sw->add_option("--steps", sw_steps, "optimizer steps per run")->capture_default_str();
  sw->add_option("--lr0", sw_lr0, "initial learning rate")->capture_default_str();
  sw->add_option("--lr1", sw_lr1, "final learning rate")->capture_default_str();
  sw->add_option("--delta", sw_delta, "confidence level for the bound column")
      ->capture_default_str();
  sw->add_option("--gauss-order", sw_gauss, "population quadrature order")
      ->capture_default_str();
  sw->add_option("--qmc-count", sw_qmc, "population quadrature points")
      ->capture_default_str();

  // bounds
  std::string bd_potential;
  double bd_B = 1.0, bd_delta = 0.1, bd_vmax = 1.0, bd_vmin = -1.0, bd_gap = 0.0;
  int bd_m = 16, bd_d = 1, bd_nsigma = 8, bd_nrestarts = 4;
  long bd_n = 1024, bd_rad_steps = 400;
  auto* bd = app.add_subcommand("bounds", "evaluate the constants and bounds table");
  bd->add_option("--B", bd_B, "coefficient budget")->capture_default_str();
  bd->add_option("--m", bd_m, "network width")->capture_default_str();
  bd->add_option("--n", bd_n, "sample count")->capture_default_str();
  bd->add_option("--d", bd_d, "dimension")->capture_default_str();
  bd->add_option("--delta", bd_delta, "confidence level")->capture_default_str();
  bd->add_option("--vmax", bd_vmax, "upper bound of V")->capture_default_str();
  bd->add_option("--vmin", bd_vmin, "lower bound of V (default: vmax)");
  bd->add_option("--approx-gap", bd_gap, "approximation gap added to the bound")
      ->capture_default_str();
  bd->add_option("--potential", bd_potential,
                 "potential JSON file; enables empirical Rademacher estimates");
  bd->add_option("--n-sigma", bd_nsigma, "sign vectors for the estimator")
      ->capture_default_str();
  bd->add_option("--n-restarts", bd_nrestarts, "ascent restarts per sign vector")
      ->capture_default_str();
  bd->add_option("--rad-steps", bd_rad_steps, "ascent steps per restart")
      ->capture_default_str();

  // stability
  std::string st_potential;
  int st_cutoff = 0;
  long st_trials = 1000;
  double st_vmin = 0.0, st_vmax = 0.0;
  bool st_have_vmin = false, st_have_vmax = false;
  auto* st = app.add_subcommand("stability", "stress the eigenvalue stability bounds");
  st->add_option("potential", st_potential, "potential JSON file")->required();
  st->add_option("--cutoff", st_cutoff, "trial-space cutoff (0 = automatic)")
      ->capture_default_str();
  st->add_option("--trials", st_trials, "number of random trial functions")
      ->capture_default_str();
  auto* st_vmin_opt = st->add_option("--vmin", st_vmin, "analytic lower bound of V");
  auto* st_vmax_opt = st->add_option("--vmax", st_vmax, "analytic upper bound of V");

  // approx
  std::string ap_target;
  std::vector<int> ap_m_list;
  int ap_seeds = 5, ap_gauss = 48;
  long ap_steps = 20000, ap_qmc = 131072;
  double ap_lr0 = 1e-2, ap_lr1 = 0.0;
  auto* ap = app.add_subcommand("approx", "width scaling of the best H1 fit");
  ap->add_option("target", ap_target, "target series JSON file")->required();
  ap->add_option("--m-list", ap_m_list, "widths to test")->required()->delimiter(',');
  ap->add_option("--seeds", ap_seeds, "seeds per width")->capture_default_str();
  ap->add_option("--steps", ap_steps, "optimizer steps per fit")->capture_default_str();
  ap->add_option("--lr0", ap_lr0, "initial learning rate")->capture_default_str();
  ap->add_option("--lr1", ap_lr1, "final learning rate")->capture_default_str();
  ap->add_option("--gauss-order", ap_gauss, "quadrature order")->capture_default_str();
  ap->add_option("--qmc-count", ap_qmc, "quadrature points, d >= 4")
      ->capture_default_str();

  // barron
  std::string br_potential;
  double br_s = 2.0;
  std::vector<int> br_cutoffs;
  auto* br = app.add_subcommand("barron", "ground-state norm saturation across cutoffs");
  br->add_option("potential", br_potential, "potential JSON file")->required();
  br->add_option("--s", br_s, "smoothness order of the potential class")
      ->capture_default_str();
  br->add_option("--cutoffs", br_cutoffs, "cutoffs, increasing")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const json err{{"code", 2}, {"error", e.what()}};
    std::printf("%s\n", err.dump().c_str());
    return 2;
  }

  try {
    std::error_code ec;
    std::filesystem::create_directories(out.out_dir, ec);
    if (ec) throw cli_error{2, "cannot create output directory: " + out.out_dir};

    if (*ref) {
      series_ptr pot = load_series(ref_potential);
      int dim = 0;
      check(sgs_series_dim(pot.get(), &dim));
      const int cutoff = ref_cutoff > 0 ? ref_cutoff : auto_cutoff(dim);
      sgs_truth* traw = nullptr;
      check(sgs_reference_solve(pot.get(), cutoff, &traw));
      std::unique_ptr<sgs_truth, decltype(&sgs_truth_free)> truth(traw, &sgs_truth_free);
      string_out js;
      check(sgs_truth_to_json(truth.get(), &js.p));
      write_file(out.of(ref_out), js.str() + "\n");
      double l0 = 0, l1 = 0, gap = 0;
      check(sgs_truth_values(truth.get(), &l0, &l1, &gap));
      std::printf("lambda0=%s\nlambda1=%s\ngap=%s\ncutoff=%d\n", fmt17(l0).c_str(),
                  fmt17(l1).c_str(), fmt17(gap).c_str(), cutoff);
    } else if (*sol) {
      const std::string pot = read_file(sol_potential);
      json cfg{{"n", sol_n},       {"steps", sol_steps}, {"lr0", sol_lr0},
               {"lr1", sol_lr1},   {"adam", !sol_no_adam}, {"seed", seed},
               {"cutoff", sol_cutoff}, {"gauss_order", sol_gauss},
               {"qmc_count", sol_qmc}};
      if (sol_m > 0) cfg["m"] = sol_m;
      if (sol_B > 0.0) cfg["B"] = sol_B;
      std::string truth_text;
      if (!sol_truth.empty()) truth_text = read_file(sol_truth);
      string_out result, trace;
      check(sgs_run_solve(pot.c_str(), cfg.dump().c_str(),
                          sol_truth.empty() ? nullptr : truth_text.c_str(), &result.p,
                          &trace.p));
      write_file(out.of(sol_out + ".json"), result.str() + "\n");
      write_file(out.of(sol_out + "_trace.csv"), trace.str());
      const json r = json::parse(result.str());
      std::printf("m=%d\n", r.at("config").at("m").get<int>());
      std::printf("empirical_energy=%s\n",
                  fmt17(r.at("empirical_energy").get<double>()).c_str());
      print_fields(r, {"population_energy", "excess"});
      if (!r.at("report").is_null())
        print_fields(r.at("report"), {"p_perp_l2", "p_perp_h1"});
    } else if (*sw) {
      const std::string pot = read_file(sw_potential);
      json cfg{{"n_list", sw_n_list}, {"seeds", sw_seeds},   {"cutoff", sw_cutoff},
               {"steps", sw_steps},   {"lr0", sw_lr0},       {"lr1", sw_lr1},
               {"delta", sw_delta},   {"seed", seed},        {"gauss_order", sw_gauss},
               {"qmc_count", sw_qmc}};
      if (sw_B > 0.0) cfg["B"] = sw_B;
      string_out result, rows;
      check(sgs_run_sweep(pot.c_str(), cfg.dump().c_str(), &result.p, &rows.p));
      write_file(out.of("sweep.json"), result.str() + "\n");
      write_file(out.of("sweep_rows.csv"), rows.str());
      const json r = json::parse(result.str());
      for (const json& c : r.at("cells")) {
        std::printf("n=%ld m=%d median_excess=%s bound=%s holds=%s\n",
                    c.at("n").get<long>(), c.at("m").get<int>(),
                    fmt17(c.at("median_excess").get<double>()).c_str(),
                    c.at("bound_feasible").get<bool>()
                        ? fmt17(c.at("bound_value").get<double>()).c_str()
                        : "infeasible",
                    c.at("bound_feasible").get<bool>()
                        ? (c.at("bound_holds").get<bool>() ? "yes" : "no")
                        : "NA");
      }
      print_fields(r, {"slope"});
    } else if (*bd) {
      json cfg{{"B", bd_B},         {"m", bd_m},
               {"n", bd_n},         {"d", bd_d},
               {"delta", bd_delta}, {"v_max", bd_vmax},
               {"approx_gap", bd_gap}, {"seed", seed},
               {"n_sigma", bd_nsigma}, {"n_restarts", bd_nrestarts},
               {"rad_steps", bd_rad_steps}};
      if (bd_vmin >= 0.0) cfg["v_min"] = bd_vmin;
      std::string pot;
      if (!bd_potential.empty()) pot = read_file(bd_potential);
      string_out report;
      check(sgs_run_bounds(cfg.dump().c_str(),
                           bd_potential.empty() ? nullptr : pot.c_str(), &report.p));
      write_file(out.of("bounds.json"), report.str() + "\n");
      const json r = json::parse(report.str());
      print_fields(r, {"M_F", "M_1", "M_2", "Lambda1", "Lambda2",
                       "rademacher_bound_1", "rademacher_bound_2",
                       "rademacher_empirical_1", "rademacher_empirical_2", "xi1",
                       "xi2", "xi3", "eta", "oracle_feasible", "oracle_rhs"});
    } else if (*st) {
      const std::string pot = read_file(st_potential);
      st_have_vmin = st_vmin_opt->count() > 0;
      st_have_vmax = st_vmax_opt->count() > 0;
      if (st_have_vmin != st_have_vmax)
        throw cli_error{2, "--vmin and --vmax must be given together"};
      series_ptr handle = load_series(st_potential);
      int dim = 0;
      check(sgs_series_dim(handle.get(), &dim));
      json cfg{{"cutoff", st_cutoff > 0 ? st_cutoff : auto_cutoff(dim)},
               {"trials", st_trials},
               {"seed", seed}};
      if (st_have_vmin) {
        cfg["v_min"] = st_vmin;
        cfg["v_max"] = st_vmax;
      }
      string_out report;
      check(sgs_run_stability(pot.c_str(), cfg.dump().c_str(), &report.p));
      write_file(out.of("stability.json"), report.str() + "\n");
      const json r = json::parse(report.str());
      print_fields(r, {"trials", "l2_violations", "h1_violations", "min_l2_slack",
                       "min_h1_slack"});
    } else if (*ap) {
      const std::string target = read_file(ap_target);
      json cfg{{"m_list", ap_m_list}, {"seeds", ap_seeds}, {"steps", ap_steps},
               {"lr0", ap_lr0},       {"lr1", ap_lr1},     {"seed", seed},
               {"gauss_order", ap_gauss}, {"qmc_count", ap_qmc}};
      string_out table;
      check(sgs_run_approx(target.c_str(), cfg.dump().c_str(), &table.p));
      write_file(out.of("approx.csv"), table.str());
      std::printf("%s", table.str().c_str());
    } else if (*br) {
      const std::string pot = read_file(br_potential);
      const json cfg{{"s", br_s}, {"cutoffs", br_cutoffs}};
      string_out table;
      check(sgs_run_barron(pot.c_str(), cfg.dump().c_str(), &table.p));
      write_file(out.of("barron.csv"), table.str());
      std::printf("%s", table.str().c_str());
    }
  } catch (const cli_error& e) {
    const json err{{"code", e.code}, {"error", e.message}};
    std::printf("%s\n", err.dump().c_str());
    return e.code;
  } catch (const std::exception& e) {
    const json err{{"code", 4}, {"error", e.what()}};
    std::printf("%s\n", err.dump().c_str());
    return 4;
  }
  return 0;
}
