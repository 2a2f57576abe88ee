#include "jsonio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace sgs {

namespace {

using nlohmann::json;

void check_keys(const json& j, const char* what,
                std::initializer_list<const char*> keys) {
  require_keys(j, what, keys, {});
}

double finite_number(const json& j, const char* what) {
  require(j.is_number(), errc::invalid_input, std::string(what) + " must be a number");
  const double v = j.get<double>();
  require(std::isfinite(v), errc::invalid_input, std::string(what) + " must be finite");
  return v;
}

int int_value(const json& j, const char* what) {
  require(j.is_number_integer(), errc::invalid_input,
          std::string(what) + " must be an integer");
  return j.get<int>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

void require_keys(const nlohmann::json& j, const char* what,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  require(j.is_object(), errc::invalid_input, std::string(what) + " must be an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || item.key() == k;
    for (const char* k : optional) known = known || item.key() == k;
    require(known, errc::invalid_input,
            std::string(what) + ": unknown key '" + item.key() + "'");
  }
  for (const char* k : required)
    require(j.contains(k), errc::invalid_input,
            std::string(what) + ": missing key '" + k + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), errc::invalid_input, "cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), errc::invalid_input, "cannot write file: " + path);
  out << content;
  require(static_cast<bool>(out), errc::invalid_input, "write failed: " + path);
}

nlohmann::json parse_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), errc::invalid_input, "malformed JSON");
  return j;
}

cosine_series series_from_json(const nlohmann::json& j) {
  check_keys(j, "series", {"dim", "coeffs"});
  const int dim = int_value(j["dim"], "dim");
  require(dim >= 1, errc::invalid_input, "dim must be >= 1");
  require(j["coeffs"].is_array(), errc::invalid_input, "coeffs must be an array");
  cosine_series s(dim);
  for (const json& term : j["coeffs"]) {
    check_keys(term, "coefficient", {"k", "v"});
    require(term["k"].is_array() &&
                term["k"].size() == static_cast<std::size_t>(dim),
            errc::invalid_input, "k must be an array of length dim");
    cosine_series::index k(dim);
    for (int i = 0; i < dim; ++i) {
      k[i] = int_value(term["k"][i], "k entry");
      require(k[i] >= 0, errc::invalid_input, "k entries must be >= 0");
    }
    const double v = finite_number(term["v"], "v");
    require(s.get(k) == 0.0, errc::invalid_input, "duplicate coefficient index");
    s.set(k, v);
  }
  return s;
}

nlohmann::json series_to_json(const cosine_series& s) {
  json coeffs = json::array();
  for (const auto& [k, v] : s.coeffs()) coeffs.push_back(json{{"k", k}, {"v", v}});
  return json{{"dim", s.dim()}, {"coeffs", std::move(coeffs)}};
}

cosine_series load_series_file(const std::string& path) {
  return series_from_json(parse_json_text(read_text_file(path)));
}

ground_truth truth_from_json(const nlohmann::json& j) {
  check_keys(j, "reference solution", {"lambda0", "lambda1", "gap", "cutoff", "ustar"});
  ground_truth t;
  t.lambda0 = finite_number(j["lambda0"], "lambda0");
  t.lambda1 = finite_number(j["lambda1"], "lambda1");
  t.gap = finite_number(j["gap"], "gap");
  t.cutoff = int_value(j["cutoff"], "cutoff");
  t.ustar = series_from_json(j["ustar"]);
  return t;
}

nlohmann::json truth_to_json(const ground_truth& t) {
  return json{{"lambda0", t.lambda0},
              {"lambda1", t.lambda1},
              {"gap", t.gap},
              {"cutoff", t.cutoff},
              {"ustar", series_to_json(t.ustar)}};
}

ground_truth load_truth_file(const std::string& path) {
  return truth_from_json(parse_json_text(read_text_file(path)));
}

two_layer_net net_from_json(const nlohmann::json& j) {
  check_keys(j, "checkpoint", {"d", "m", "tau", "B", "c", "gamma", "w", "t"});
  two_layer_net net;
  net.d = int_value(j["d"], "d");
  net.m = int_value(j["m"], "m");
  require(net.d >= 1 && net.m >= 0, errc::invalid_input, "invalid network shape");
  net.tau = finite_number(j["tau"], "tau");
  net.B = finite_number(j["B"], "B");
  require(net.tau > 0.0 && net.B > 0.0, errc::invalid_input,
          "tau and B must be positive");
  net.c = finite_number(j["c"], "c");
  const auto& jg = j["gamma"];
  const auto& jw = j["w"];
  const auto& jt = j["t"];
  const auto sz = static_cast<std::size_t>(net.m);
  require(jg.is_array() && jg.size() == sz, errc::invalid_input,
          "gamma must have m entries");
  require(jw.is_array() && jw.size() == sz, errc::invalid_input,
          "w must have m rows");
  require(jt.is_array() && jt.size() == sz, errc::invalid_input,
          "t must have m entries");
  net.gamma.resize(net.m);
  net.t.resize(net.m);
  net.w.resize(net.m, net.d);
  for (int i = 0; i < net.m; ++i) {
    net.gamma[i] = finite_number(jg[i], "gamma entry");
    net.t[i] = finite_number(jt[i], "t entry");
    require(jw[i].is_array() && jw[i].size() == static_cast<std::size_t>(net.d),
            errc::invalid_input, "w rows must have d entries");
    for (int k = 0; k < net.d; ++k) net.w(i, k) = finite_number(jw[i][k], "w entry");
  }
  return net;
}

nlohmann::json net_to_json(const two_layer_net& net) {
  json gamma = json::array(), t = json::array(), w = json::array();
  for (int i = 0; i < net.m; ++i) {
    gamma.push_back(net.gamma[i]);
    t.push_back(net.t[i]);
    json row = json::array();
    for (int k = 0; k < net.d; ++k) row.push_back(net.w(i, k));
    w.push_back(std::move(row));
  }
  return json{{"d", net.d},     {"m", net.m}, {"tau", net.tau}, {"B", net.B},
              {"c", net.c},     {"gamma", std::move(gamma)},
              {"w", std::move(w)}, {"t", std::move(t)}};
}

nlohmann::json train_result_to_json(const train_result& r) {
  json cfg{{"n", r.cfg.n},         {"m", r.cfg.m},
           {"B", r.cfg.B},         {"steps", r.cfg.steps},
           {"lr0", r.cfg.lr0},     {"lr1", r.cfg.lr1},
           {"adam", r.cfg.adam},   {"seed", r.cfg.seed},
           {"gauss_order", r.cfg.gauss_order},
           {"qmc_count", r.cfg.qmc_count}};
  json j{{"config", std::move(cfg)},
         {"network", net_to_json(r.net)},
         {"empirical_energy", r.e_n},
         {"population_energy", r.pop_energy}};
  if (r.has_report) {
    j["report"] = json{{"energy", r.report.energy},
                       {"e_v", r.report.e_v},
                       {"e_2", r.report.e_2},
                       {"l2_norm", r.report.l2_norm},
                       {"h1_norm", r.report.h1_norm},
                       {"overlap", r.report.overlap},
                       {"p_perp_l2", r.report.p_perp_l2},
                       {"p_perp_h1", r.report.p_perp_h1}};
    j["excess"] = number_or_null(r.excess);
  } else {
    j["report"] = nullptr;
    j["excess"] = nullptr;
  }
  return j;
}

nlohmann::json sweep_result_to_json(const sweep_result& r) {
  json cells = json::array();
  for (const sweep_cell& c : r.cells) {
    cells.push_back(json{{"n", c.n},
                         {"m", c.m},
                         {"median_excess", c.median_excess},
                         {"bound_feasible", c.bound_feasible},
                         {"bound_value", number_or_null(c.bound_value)},
                         {"bound_holds", c.bound_holds}});
  }
  return json{{"cells", std::move(cells)},
              {"slope", r.slope_applicable ? json(r.slope) : json(nullptr)},
              {"slope_applicable", r.slope_applicable},
              {"B", r.B},
              {"delta", r.delta},
              {"truth", truth_to_json(r.truth)}};
}

nlohmann::json bounds_report_to_json(const bounds_report& r) {
  json j{{"B", r.params.B},
         {"m", r.params.m},
         {"d", r.params.d},
         {"v_min", r.params.v_min},
         {"v_max", r.params.v_max},
         {"n", r.n},
         {"delta", r.delta},
         {"M_F", r.env.m_f},
         {"M_1", r.env.m_1},
         {"M_2", r.env.m_2},
         {"Lambda1", r.lambda1},
         {"Lambda2", r.lambda2},
         {"rademacher_bound_1", r.rademacher_bound_1},
         {"rademacher_bound_2", r.rademacher_bound_2},
         {"xi1", r.xi.xi1},
         {"xi2", r.xi.xi2},
         {"xi3", r.xi.xi3},
         {"eta", r.xi.eta},
         {"approx_gap", r.approx_gap},
         {"oracle_feasible", r.oracle.feasible},
         {"oracle_rhs", r.oracle.feasible ? json(r.oracle.value) : json(nullptr)},
         {"stability", nullptr}};
  j["rademacher_empirical_1"] =
      r.rademacher_empirical_1 ? json(*r.rademacher_empirical_1) : json(nullptr);
  j["rademacher_empirical_2"] =
      r.rademacher_empirical_2 ? json(*r.rademacher_empirical_2) : json(nullptr);
  return j;
}

nlohmann::json stability_to_json(const stability_trials_result& r) {
  return json{{"trials", r.trials},
              {"l2_violations", r.l2_violations},
              {"h1_violations", r.h1_violations},
              {"min_l2_slack", r.min_l2_slack},
              {"min_h1_slack", r.min_h1_slack}};
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const std::vector<double>& trace) {
  std::string out = "step,e_n\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out += std::to_string(i) + "," + csv_number(trace[i]) + "\n";
  return out;
}

std::string sweep_rows_csv(const std::vector<sweep_row>& rows) {
  std::string out = "seed,n,m,energy,excess,p_perp_l2,p_perp_h1\n";
  for (const sweep_row& r : rows) {
    out += std::to_string(r.seed) + "," + std::to_string(r.n) + "," +
           std::to_string(r.m) + "," + csv_number(r.energy) + "," +
           csv_number(r.excess) + "," + csv_number(r.p_perp_l2) + "," +
           csv_number(r.p_perp_h1) + "\n";
  }
  return out;
}

std::string approx_table_csv(const std::vector<approx_row>& rows) {
  std::string out = "m,h1_best,h1_median,eta\n";
  for (const approx_row& r : rows) {
    out += std::to_string(r.m) + "," + csv_number(r.h1_best) + "," +
           csv_number(r.h1_median) + "," + csv_number(r.eta) + "\n";
  }
  return out;
}

std::string barron_table_csv(const std::vector<std::pair<int, double>>& rows) {
  std::string out = "cutoff,barron_norm\n";
  for (const auto& [k, v] : rows)
    out += std::to_string(k) + "," + csv_number(v) + "\n";
  return out;
}

} // namespace sgs
