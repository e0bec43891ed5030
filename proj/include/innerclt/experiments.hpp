#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/stats.hpp"
#include "innerclt/transfer.hpp"

namespace innerclt {

// Coefficient family addressable from configs and the CLI.
struct CoefficientFamily {
  enum class Kind { ones, sqrt_ramp, geometric, random };

  Kind kind = Kind::ones;
  double ratio = 0.5;      // geometric only
  std::uint64_t seed = 1;  // random only

  CoefficientSequence make(int n) const;
  bool square_summable() const;
  // sum_{n > beyond} |a_n|^2; only the geometric family has one.
  double l2_tail_mass(int beyond) const;
  std::string name() const;

  static CoefficientFamily parse(const std::string& name, double ratio,
                                 std::uint64_t seed);
};

struct ExperimentConfig {
  BlaschkeProduct f = BlaschkeProduct::zero_times_factor(Complex(0.5));
  CoefficientFamily family{};
  std::vector<int> n_grid = {10, 100, 1000};
  long samples = 100000;
  std::uint64_t seed = 20260808;
  int alpha_count = 64;
  double delta = 1.0;
  double c_user = 1.0;

  // Artifact calibration (pre-registered pilot-run thresholds, not claims
  // from any closed-form source).
  double clt_ks_threshold = 0.02;
  double tail_ks_threshold = 0.05;
  double rate_exponent_max = -0.15;

  void validate() const;
};

struct ReportRow {
  long n = 0;
  double sigma_n = 0.0;
  double rho_n = 0.0;
  double abs_b_n = 0.0;
  double ks_sup = 0.0;
  double rhs_bound = 0.0;
  double m_n_est = 0.0;
  double v_n2_est = 0.0;
  double weak_law_moment = 0.0;
};

struct RateFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  int points_used = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::optional<RateFit> fit;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// Z_N(w) = sigma_N^{-1} sum_{n<=N} a_n f∘n(w) over `samples` independent
// uniform boundary points; counter-based streams keyed by (seed, N, draw
// index), so the batch is identical for every worker count.
ComplexSamples sample_zn(const ExperimentConfig& config, int n);

// The boundary point behind draw `index` of sample_zn(config, n).
UnitComplex zn_draw_point(const ExperimentConfig& config, int n, long index);

// Per-N Cramer-Wold KS discrepancies plus transfer data and the error bound.
ExperimentReport clt_experiment(const ExperimentConfig& config);

// Least-squares slope of log ks_sup against log N over the points above the
// noise floor; throws NoiseFloor when fewer than 4 remain.
RateFit rate_fit(const std::vector<std::pair<double, double>>& n_vs_ks,
                 double noise_floor);
RateFit rate_fit(const ExperimentReport& report);

// Brown-Eagleson condition diagnostics at one N, projection direction
// alpha = 1: the max conditional-variance share (C1), the Monte Carlo mean
// and standard error of V_N^2 (C2), and the frequency of the epsilon = 0.1
// Lindeberg indicator (C3).
struct BrownEaglesonDiagnostics {
  double m_n_est = 0.0;
  double v_n2_est = 0.0;
  double v_n2_se = 0.0;
  double lindeberg_freq = 0.0;
};

BrownEaglesonDiagnostics brown_eagleson_diagnostics(const ExperimentConfig& config,
                                                    int n);

struct WeakLawRow {
  long n = 0;
  double second_moment = 0.0;  // MC estimate of E |S_N^{-1} sum a_n f∘n|^2
  double se = 0.0;
  double envelope = 0.0;  // (1+|l|)/(1-|l|) sum|a_n|^2 / S_N^2
};

std::vector<WeakLawRow> weak_law_experiment(const ExperimentConfig& config);

struct TailCltResult {
  double ks_sup = 0.0;
  double sigma_tail = 0.0;      // sigma(N) of the truncated tail
  double discarded_ratio = 0.0; // bound on discarded L2 mass over sigma(N)^2
};

// Normalized truncated tail sum sum_{n=tail_start}^{truncation} a_n f∘n
// against CN(0,1) projections; requires an l2 family and a truncation fine
// enough that the discarded mass is <= 1e-4 of sigma(N)^2.
TailCltResult tail_clt_experiment(const ExperimentConfig& config, int tail_start,
                                  int truncation);

// Everything results.csv needs: KS row, bound, Brown-Eagleson diagnostics and
// weak-law moment per N, plus the rate fit when enough points clear the floor.
ExperimentReport run_simulation(const ExperimentConfig& config);

}  // namespace innerclt
