#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "bounds.hpp"
#include "galerkin.hpp"
#include "network.hpp"
#include "series.hpp"
#include "trainer.hpp"

namespace sgs {

// File and schema errors map to the invalid-input class (CLI exit 2); every
// serialized float round-trips bit-exactly.

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
nlohmann::json parse_json_text(const std::string& text);

// Rejects unknown keys and missing required keys.
void require_keys(const nlohmann::json& j, const char* what,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {});

// {"dim": d, "coeffs": [{"k": [..], "v": x}, ..]}; duplicate indices rejected.
cosine_series series_from_json(const nlohmann::json& j);
nlohmann::json series_to_json(const cosine_series& s);
cosine_series load_series_file(const std::string& path);

// {"lambda0", "lambda1", "gap", "cutoff", "ustar"}
ground_truth truth_from_json(const nlohmann::json& j);
nlohmann::json truth_to_json(const ground_truth& t);
ground_truth load_truth_file(const std::string& path);

// Network checkpoint {"d","m","tau","B","c","gamma","w","t"}.
two_layer_net net_from_json(const nlohmann::json& j);
nlohmann::json net_to_json(const two_layer_net& net);

nlohmann::json train_result_to_json(const train_result& r); // wall time excluded
nlohmann::json sweep_result_to_json(const sweep_result& r);
nlohmann::json bounds_report_to_json(const bounds_report& r);
nlohmann::json stability_to_json(const stability_trials_result& r);

// CSV: '.' decimal, 17 significant digits.
std::string csv_number(double v);
std::string trace_csv(const std::vector<double>& trace);
std::string sweep_rows_csv(const std::vector<sweep_row>& rows);
std::string approx_table_csv(const std::vector<approx_row>& rows);
std::string barron_table_csv(const std::vector<std::pair<int, double>>& rows);

} // namespace sgs
