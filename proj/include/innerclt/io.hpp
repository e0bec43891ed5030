#pragma once

#include <string>

#include <json.hpp>

#include "innerclt/blaschke.hpp"
#include "innerclt/experiments.hpp"

namespace innerclt {

// {"zeros": [[re, im], ...], "rotation": [re, im]}; exact round-trip.
nlohmann::json blaschke_to_json(const BlaschkeProduct& f);
BlaschkeProduct blaschke_from_json(const nlohmann::json& j,
                                   double zero_cap = kDefaultZeroCap);

// Experiment config from a TOML (flat key = value subset) or JSON file;
// the format is chosen by extension, with a content sniff as fallback.
// Keys mirror the ExperimentConfig fields in snake_case.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Minimal TOML reader for flat `key = value` files (strings, numbers,
// booleans, single-line possibly nested arrays, # comments).
nlohmann::json parse_toml_subset(const std::string& text);

// results.csv: columns exactly
// N,sigma_N,rho_N,abs_b_N,ks_sup,rhs_bound,mN_est,VN2_est,weak_law_moment
// with 17-significant-digit values.
void write_results_csv(const ExperimentReport& report, const std::string& path);
ExperimentReport read_results_csv(const std::string& path);

void write_metadata_json(const ExperimentReport& report, const ExperimentConfig& config,
                         const std::string& path, const TailCltResult* tail = nullptr);

// Coefficient CSV: one row per n, columns n,re_a,im_a.
void write_coefficients_csv(const CoefficientSequence& a, const std::string& path);
CoefficientSequence read_coefficients_csv(const std::string& path);

// Static log-log SVG line plot of ks_sup against N.
void write_ks_plot_svg(const ExperimentReport& report, const std::string& path);

// 17-significant-digit decimal form; round-trips through strtod exactly.
std::string format_full(double x);

}  // namespace innerclt
