#pragma once

#include <cstdint>
#include <utility>

#include "innerclt/transfer.hpp"
#include "innerclt/types.hpp"

namespace innerclt {

// CDF of N(0, variance), erfc-based.
double normal_cdf(double x, double variance);

// CDF of N(0, 1/2), the Cramer-Wold target law.
inline double normal_half_cdf(double x) { return normal_cdf(x, 0.5); }

// Sorted real Monte Carlo draws, reproducible from (seed, generation params).
struct SampleBatch {
  RArray values;  // ascending
  std::uint64_t seed = 0;

  long count() const { return values.size(); }
};

// Sorts on construction.
SampleBatch make_sample_batch(RArray values, std::uint64_t seed);

// Complex draws of Z_N before projection; kept in draw order.
struct ComplexSamples {
  CArray values;
  std::uint64_t seed = 0;

  long count() const { return values.size(); }
};

// Exact one-sample Kolmogorov-Smirnov statistic,
// max_i max(i/n - F(x_i), F(x_i) - (i-1)/n).
template <typename Cdf>
double ks_distance(const SampleBatch& samples, Cdf&& cdf) {
  const long n = samples.count();
  if (n < 1) throw EmptySample("ks_distance: no samples");
  const double inv_n = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  for (long i = 0; i < n; ++i) {
    const double f = cdf(samples.values[i]);
    worst = std::max(worst, std::max((i + 1) * inv_n - f, f - i * inv_n));
  }
  return worst;
}

// Grid search for the perturbation constant of the normal CDF,
// sup |Phi(p x + q) - Phi(x)| / (|p-1| + |q|) over [1/2,3/2] x [-1,1] x [-10,10],
// excluding (p,q) = (1,0) (up to 1e-12, below which the difference is
// rounding noise).
//
// The empirical supremum of that ratio is 1/sqrt(pi) ~ 0.5642, approached as
// (p,q) -> (1,0); the ~1.348 constant is the supremum of the mean-value
// majorant max(|x|,1) e^{-max(0,|x|/2-1)^2} / sqrt(pi), reported separately.
// Both stay below 1.35.
struct NormalPerturbationReport {
  double max_ratio = 0.0;  // empirical CDF-difference ratio over the grid
  double p = 0.0, q = 0.0, x = 0.0;
  double majorant_max = 0.0;  // grid supremum of the proof majorant
  double majorant_x = 0.0;
};

NormalPerturbationReport normal_perturbation_check(double p_step = 1e-3, double q_step = 1e-3,
                                double x_step = 1e-3);

// Inputs of the error-bound evaluator. The constant C(delta, f) of the bound
// is not known in closed form; it enters only through c_user.
struct BoundParams {
  double delta = 1.0;
  double c_user = 1.0;
  Complex lambda{};
};

struct BerryEsseenParts {
  double fluctuation = 0.0;  // c_user * (sum |a|^4)^e1 * (sum |a|^2)^{-e2}
  double remainder = 0.0;    // 2.7 |l|/(1-|l|) |b_N| / sqrt(sum |a|^2)
  double abs_b_n = 0.0;      // |sum lambda^{N-n} a_n|
  double exponent_quartic = 0.0;   // e1 = (1+d)/(6+4d)
  double exponent_quadratic = 0.0; // e2 = (1+d)/(3+2d)

  double total() const { return fluctuation + remainder; }
};

BerryEsseenParts berry_esseen_rhs_parts(const CoefficientSequence& a, const BoundParams& params,
                                 int n);

inline double berry_esseen_rhs(const CoefficientSequence& a, const BoundParams& params,
                           int n) {
  return berry_esseen_rhs_parts(a, params, n).total();
}

// Discretized sup over alpha in T of the KS distance of Re(alpha Z) against
// N(0, 1/2); alpha runs over alpha_count equispaced directions.
struct CramerWoldResult {
  double sup_discrepancy = 0.0;
  Complex worst_alpha{1.0, 0.0};
};

CramerWoldResult cramer_wold_discrepancy(const ComplexSamples& z, int alpha_count);

// p_N and q_N of the perturbation step: p_N = sigma/(sqrt(1-|l|^2) rho),
// q_N = |l|/sqrt(1-|l|^2) |b_N|/rho; always |p_N - 1| <= q_N.
struct PerturbationDiagnostics {
  double p = 1.0;
  double q = 0.0;
};

PerturbationDiagnostics perturbation_diagnostics(const TransferredSequence& b);

}  // namespace innerclt
