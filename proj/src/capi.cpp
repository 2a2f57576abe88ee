#include "sgs/sgs.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "errors.hpp"
#include "galerkin.hpp"
#include "jsonio.hpp"
#include "series.hpp"
#include "trainer.hpp"

struct sgs_series {
  sgs::cosine_series s;
};

struct sgs_truth {
  sgs::ground_truth t;
};

namespace {

using nlohmann::json;

thread_local std::string g_error;

template <class F>
sgs_status guarded(F&& f) {
  try {
    f();
    g_error.clear();
    return SGS_OK;
  } catch (const sgs::error& e) {
    g_error = e.what();
    return static_cast<sgs_status>(static_cast<int>(e.code()));
  } catch (const std::exception& e) {
    g_error = e.what();
    return SGS_NUMERIC_FAILURE;
  } catch (...) {
    g_error = "unknown failure";
    return SGS_NUMERIC_FAILURE;
  }
}

void check_arg(const void* p, const char* what) {
  sgs::require(p != nullptr, sgs::errc::invalid_input,
               std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_config(const char* text, const char* what) {
  check_arg(text, what);
  return sgs::parse_json_text(text);
}

long jlong(const json& j, const char* k, long dflt) {
  if (!j.contains(k)) return dflt;
  sgs::require(j[k].is_number_integer(), sgs::errc::invalid_input,
               std::string(k) + " must be an integer");
  return j[k].get<long>();
}

long jlong_required(const json& j, const char* k) {
  sgs::require(j.contains(k), sgs::errc::invalid_input,
               std::string("missing key '") + k + "'");
  return jlong(j, k, 0);
}

double jdouble(const json& j, const char* k, double dflt) {
  if (!j.contains(k)) return dflt;
  sgs::require(j[k].is_number(), sgs::errc::invalid_input,
               std::string(k) + " must be a number");
  const double v = j[k].get<double>();
  sgs::require(std::isfinite(v), sgs::errc::invalid_input,
               std::string(k) + " must be finite");
  return v;
}

double jdouble_required(const json& j, const char* k) {
  sgs::require(j.contains(k), sgs::errc::invalid_input,
               std::string("missing key '") + k + "'");
  return jdouble(j, k, 0.0);
}

bool jbool(const json& j, const char* k, bool dflt) {
  if (!j.contains(k)) return dflt;
  sgs::require(j[k].is_boolean(), sgs::errc::invalid_input,
               std::string(k) + " must be a boolean");
  return j[k].get<bool>();
}

std::uint64_t jseed(const json& j, const char* k, std::uint64_t dflt) {
  if (!j.contains(k)) return dflt;
  sgs::require(j[k].is_number_integer() && !(j[k].is_number_integer() &&
                                             !j[k].is_number_unsigned() &&
                                             j[k].get<long long>() < 0),
               sgs::errc::invalid_input,
               std::string(k) + " must be a nonnegative integer");
  return j[k].get<std::uint64_t>();
}

std::vector<long> jlong_list(const json& j, const char* k) {
  sgs::require(j.contains(k) && j[k].is_array(), sgs::errc::invalid_input,
               std::string(k) + " must be an array");
  std::vector<long> out;
  for (const json& e : j[k]) {
    sgs::require(e.is_number_integer(), sgs::errc::invalid_input,
                 std::string(k) + " entries must be integers");
    out.push_back(e.get<long>());
  }
  return out;
}

// Largest cutoff with (K+1)^d within the dense-eigensolve cap, limited to 64.
int default_cutoff(int d) {
  int k = 1;
  while (k + 1 <= 64 &&
         std::pow(static_cast<double>(k + 2), d) <= 20000.0)
    ++k;
  return k;
}

sgs::train_config solve_config_from(const json& j) {
  sgs::require_keys(j, "solve config", {"n"},
                    {"m", "B", "steps", "lr0", "lr1", "adam", "seed", "cutoff",
                     "gauss_order", "qmc_count"});
  sgs::train_config cfg;
  cfg.n = jlong_required(j, "n");
  cfg.m = static_cast<int>(jlong(j, "m", 0));
  cfg.B = jdouble(j, "B", 0.0);
  cfg.steps = jlong(j, "steps", cfg.steps);
  cfg.lr0 = jdouble(j, "lr0", cfg.lr0);
  cfg.lr1 = jdouble(j, "lr1", cfg.lr1);
  cfg.adam = jbool(j, "adam", cfg.adam);
  cfg.seed = jseed(j, "seed", cfg.seed);
  cfg.gauss_order = static_cast<int>(jlong(j, "gauss_order", cfg.gauss_order));
  const long qmc = jlong(j, "qmc_count", static_cast<long>(cfg.qmc_count));
  sgs::require(qmc >= 1, sgs::errc::invalid_input, "qmc_count must be >= 1");
  cfg.qmc_count = static_cast<std::size_t>(qmc);
  return cfg;
}

} // namespace

extern "C" {

const char* sgs_last_error(void) { return g_error.c_str(); }

void sgs_string_free(char* s) { std::free(s); }

sgs_status sgs_series_parse(const char* json_text, sgs_series** out) {
  return guarded([&] {
    check_arg(out, "output handle");
    const json j = parse_config(json_text, "series JSON");
    *out = new sgs_series{sgs::series_from_json(j)};
  });
}

sgs_status sgs_series_to_json(const sgs_series* s, char** out) {
  return guarded([&] {
    check_arg(s, "series handle");
    check_arg(out, "output string");
    *out = dup_string(sgs::series_to_json(s->s).dump(2));
  });
}

void sgs_series_free(sgs_series* s) { delete s; }

sgs_status sgs_series_dim(const sgs_series* s, int* out) {
  return guarded([&] {
    check_arg(s, "series handle");
    check_arg(out, "output value");
    *out = s->s.dim();
  });
}

sgs_status sgs_series_evaluate(const sgs_series* s, const double* x, size_t dim,
                               double* out) {
  return guarded([&] {
    check_arg(s, "series handle");
    check_arg(x, "point");
    check_arg(out, "output value");
    sgs::require(dim == static_cast<size_t>(s->s.dim()), sgs::errc::invalid_input,
                 "point dimension mismatch");
    *out = s->s.evaluate(x);
  });
}

sgs_status sgs_series_barron_norm(const sgs_series* s, double order, double* out) {
  return guarded([&] {
    check_arg(s, "series handle");
    check_arg(out, "output value");
    *out = sgs::barron_norm(s->s, order);
  });
}

sgs_status sgs_reference_solve(const sgs_series* potential, int cutoff,
                               sgs_truth** out) {
  return guarded([&] {
    check_arg(potential, "potential handle");
    check_arg(out, "output handle");
    sgs::galerkin_config cfg;
    cfg.cutoff = cutoff;
    *out = new sgs_truth{sgs::solve_ground_truth(potential->s, cfg)};
  });
}

sgs_status sgs_truth_parse(const char* json_text, sgs_truth** out) {
  return guarded([&] {
    check_arg(out, "output handle");
    const json j = parse_config(json_text, "reference JSON");
    *out = new sgs_truth{sgs::truth_from_json(j)};
  });
}

sgs_status sgs_truth_to_json(const sgs_truth* t, char** out) {
  return guarded([&] {
    check_arg(t, "reference handle");
    check_arg(out, "output string");
    *out = dup_string(sgs::truth_to_json(t->t).dump(2));
  });
}

void sgs_truth_free(sgs_truth* t) { delete t; }

sgs_status sgs_truth_values(const sgs_truth* t, double* lambda0, double* lambda1,
                            double* gap) {
  return guarded([&] {
    check_arg(t, "reference handle");
    if (lambda0) *lambda0 = t->t.lambda0;
    if (lambda1) *lambda1 = t->t.lambda1;
    if (gap) *gap = t->t.gap;
  });
}

sgs_status sgs_power_iterate(const char* potential_json, int cutoff, double tol,
                             int max_iters, double* lambda, int* iterations) {
  return guarded([&] {
    const sgs::cosine_series V =
        sgs::series_from_json(parse_config(potential_json, "potential JSON"));
    sgs::galerkin_config cfg;
    cfg.cutoff = cutoff;
    const sgs::eigenpair p = sgs::power_iterate(V, cfg, tol, max_iters);
    if (lambda) *lambda = p.lambda;
    if (iterations) *iterations = p.iterations;
  });
}

sgs_status sgs_run_solve(const char* potential_json, const char* config_json,
                         const char* truth_json, char** result_json,
                         char** trace_csv_out) {
  return guarded([&] {
    check_arg(result_json, "result output");
    check_arg(trace_csv_out, "trace output");
    const sgs::cosine_series V =
        sgs::series_from_json(parse_config(potential_json, "potential JSON"));
    const json j = parse_config(config_json, "solve config");
    const sgs::train_config cfg = solve_config_from(j);
    sgs::ground_truth truth;
    if (truth_json != nullptr) {
      truth = sgs::truth_from_json(sgs::parse_json_text(truth_json));
    } else {
      sgs::galerkin_config gcfg;
      const int k = static_cast<int>(jlong(j, "cutoff", 0));
      gcfg.cutoff = k > 0 ? k : default_cutoff(V.dim());
      truth = sgs::solve_ground_truth(V, gcfg);
    }
    const sgs::train_result tr = sgs::train(V, cfg, &truth);
    const std::string result = sgs::train_result_to_json(tr).dump(2);
    const std::string trace = sgs::trace_csv(tr.trace);
    char* r = dup_string(result);
    char* t = nullptr;
    try {
      t = dup_string(trace);
    } catch (...) {
      std::free(r);
      throw;
    }
    *result_json = r;
    *trace_csv_out = t;
  });
}

sgs_status sgs_run_sweep(const char* potential_json, const char* config_json,
                         char** result_json, char** rows_csv) {
  return guarded([&] {
    check_arg(result_json, "result output");
    check_arg(rows_csv, "rows output");
    const sgs::cosine_series V =
        sgs::series_from_json(parse_config(potential_json, "potential JSON"));
    const json j = parse_config(config_json, "sweep config");
    sgs::require_keys(j, "sweep config", {"n_list", "seeds", "cutoff"},
                      {"B", "steps", "lr0", "lr1", "adam", "seed", "delta",
                       "gauss_order", "qmc_count"});
    sgs::train_config tpl;
    tpl.B = jdouble(j, "B", 0.0);
    tpl.steps = jlong(j, "steps", tpl.steps);
    tpl.lr0 = jdouble(j, "lr0", tpl.lr0);
    tpl.lr1 = jdouble(j, "lr1", tpl.lr1);
    tpl.adam = jbool(j, "adam", tpl.adam);
    tpl.seed = jseed(j, "seed", tpl.seed);
    tpl.gauss_order = static_cast<int>(jlong(j, "gauss_order", tpl.gauss_order));
    tpl.qmc_count = static_cast<std::size_t>(
        jlong(j, "qmc_count", static_cast<long>(tpl.qmc_count)));
    const std::vector<long> n_list = jlong_list(j, "n_list");
    const int seeds = static_cast<int>(jlong_required(j, "seeds"));
    const int cutoff = static_cast<int>(jlong_required(j, "cutoff"));
    const double delta = jdouble(j, "delta", 0.1);
    const sgs::sweep_result sw = sgs::sweep(V, n_list, seeds, tpl, cutoff, delta);
    const std::string result = sgs::sweep_result_to_json(sw).dump(2);
    const std::string rows = sgs::sweep_rows_csv(sw.rows);
    char* r = dup_string(result);
    char* c = nullptr;
    try {
      c = dup_string(rows);
    } catch (...) {
      std::free(r);
      throw;
    }
    *result_json = r;
    *rows_csv = c;
  });
}

sgs_status sgs_run_bounds(const char* config_json, const char* potential_json,
                          char** report_json) {
  return guarded([&] {
    check_arg(report_json, "report output");
    const json j = parse_config(config_json, "bounds config");
    sgs::require_keys(j, "bounds config", {"B", "m", "n", "delta", "v_max"},
                      {"v_min", "d", "approx_gap", "seed", "n_sigma",
                       "n_restarts", "rad_steps"});
    sgs::class_params p;
    p.B = jdouble_required(j, "B");
    p.m = static_cast<int>(jlong_required(j, "m"));
    p.d = static_cast<int>(jlong(j, "d", 1));
    p.v_max = jdouble_required(j, "v_max");
    p.v_min = jdouble(j, "v_min", p.v_max);
    const long n = jlong_required(j, "n");
    const double delta = jdouble_required(j, "delta");
    const double approx_gap = jdouble(j, "approx_gap", 0.0);
    sgs::rademacher_config rc;
    rc.seed = jseed(j, "seed", rc.seed);
    rc.n_sigma = static_cast<int>(jlong(j, "n_sigma", rc.n_sigma));
    rc.n_restarts = static_cast<int>(jlong(j, "n_restarts", rc.n_restarts));
    rc.steps = jlong(j, "rad_steps", rc.steps);
    sgs::cosine_series V(1);
    const sgs::cosine_series* vp = nullptr;
    if (potential_json != nullptr) {
      V = sgs::series_from_json(sgs::parse_json_text(potential_json));
      sgs::require(V.dim() == p.d, sgs::errc::invalid_input,
                   "potential dimension mismatch");
      vp = &V;
    }
    const sgs::bounds_report rep =
        sgs::make_bounds_report(p, n, delta, approx_gap, vp, rc);
    *report_json = dup_string(sgs::bounds_report_to_json(rep).dump(2));
  });
}

sgs_status sgs_run_stability(const char* potential_json, const char* config_json,
                             char** report_json) {
  return guarded([&] {
    check_arg(report_json, "report output");
    const sgs::cosine_series V =
        sgs::series_from_json(parse_config(potential_json, "potential JSON"));
    const json j = parse_config(config_json, "stability config");
    sgs::require_keys(j, "stability config", {"cutoff", "trials"},
                      {"seed", "v_min", "v_max"});
    const int cutoff = static_cast<int>(jlong_required(j, "cutoff"));
    const long trials = jlong_required(j, "trials");
    const std::uint64_t seed = jseed(j, "seed", 1);
    double v_min, v_max;
    if (j.contains("v_min") || j.contains("v_max")) {
      v_min = jdouble_required(j, "v_min");
      v_max = jdouble_required(j, "v_max");
    } else {
      std::tie(v_min, v_max) = sgs::potential_range(V);
    }
    const sgs::stability_trials_result r =
        sgs::stability_trials(V, cutoff, trials, seed, v_min, v_max);
    json out = sgs::stability_to_json(r);
    out["cutoff"] = cutoff;
    out["seed"] = seed;
    out["v_min"] = v_min;
    out["v_max"] = v_max;
    *report_json = dup_string(out.dump(2));
  });
}

sgs_status sgs_run_approx(const char* target_json, const char* config_json,
                          char** table_csv) {
  return guarded([&] {
    check_arg(table_csv, "table output");
    const sgs::cosine_series target =
        sgs::series_from_json(parse_config(target_json, "target JSON"));
    const json j = parse_config(config_json, "approx config");
    sgs::require_keys(j, "approx config", {"m_list", "seeds"},
                      {"steps", "lr0", "lr1", "seed", "gauss_order", "qmc_count"});
    sgs::approx_config cfg;
    cfg.steps = jlong(j, "steps", cfg.steps);
    cfg.lr0 = jdouble(j, "lr0", cfg.lr0);
    cfg.lr1 = jdouble(j, "lr1", cfg.lr1);
    cfg.seed = jseed(j, "seed", cfg.seed);
    cfg.gauss_order = static_cast<int>(jlong(j, "gauss_order", cfg.gauss_order));
    cfg.qmc_count = static_cast<std::size_t>(
        jlong(j, "qmc_count", static_cast<long>(cfg.qmc_count)));
    std::vector<int> m_list;
    for (const long m : jlong_list(j, "m_list")) m_list.push_back(static_cast<int>(m));
    const int seeds = static_cast<int>(jlong_required(j, "seeds"));
    const auto table = sgs::approximation_check(target, m_list, seeds, cfg);
    *table_csv = dup_string(sgs::approx_table_csv(table));
  });
}

sgs_status sgs_run_barron(const char* potential_json, const char* config_json,
                          char** table_csv) {
  return guarded([&] {
    check_arg(table_csv, "table output");
    const sgs::cosine_series V =
        sgs::series_from_json(parse_config(potential_json, "potential JSON"));
    const json j = parse_config(config_json, "barron config");
    sgs::require_keys(j, "barron config", {"s", "cutoffs"}, {});
    const double s = jdouble_required(j, "s");
    std::vector<int> cutoffs;
    for (const long k : jlong_list(j, "cutoffs")) cutoffs.push_back(static_cast<int>(k));
    const auto table = sgs::barron_saturation(V, s, cutoffs);
    *table_csv = dup_string(sgs::barron_table_csv(table));
  });
}

} // extern "C"
