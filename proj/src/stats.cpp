#include "innerclt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "innerclt/parallel.hpp"

namespace innerclt {

double normal_cdf(double x, double variance) {
  if (!(variance > 0.0))
    throw NonpositiveVariance("normal_cdf: variance must be positive");
  return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

SampleBatch make_sample_batch(RArray values, std::uint64_t seed) {
  SampleBatch batch;
  batch.values = std::move(values);
  batch.seed = seed;
  std::sort(batch.values.data(), batch.values.data() + batch.values.size());
  return batch;
}

namespace {

// |Phi(p x + q) - Phi(x)| with Phi = N(0,1/2) CDF = erfc(-x)/2.
double cdf_gap(double p, double q, double x) {
  return std::abs(0.5 * std::erfc(-(p * x + q)) - 0.5 * std::erfc(-x));
}

}  // namespace

NormalPerturbationReport normal_perturbation_check(double p_step, double q_step, double x_step) {
  if (!(p_step > 0.0) || !(q_step > 0.0) || !(x_step > 0.0))
    throw std::invalid_argument("normal_perturbation_check: grid steps must be positive");

  constexpr double p_lo = 0.5, p_hi = 1.5;
  constexpr double q_lo = -1.0, q_hi = 1.0;
  constexpr double x_lo = -10.0, x_hi = 10.0;
  const long np = std::lround((p_hi - p_lo) / p_step) + 1;
  const long nq = std::lround((q_hi - q_lo) / q_step) + 1;
  const long nx = std::lround((x_hi - x_lo) / x_step) + 1;
  auto x_at = [&](long i) { return x_lo + i * x_step; };

  // The grid maximum over x of |dPhi| sits at a grid point bracketing a
  // critical point of dPhi (p phi(px+q) = phi(x), a quadratic in x after
  // taking logs) or at the grid ends; dPhi is monotone in between. Scanning
  // just those candidates equals the full x scan.
  struct Best {
    double ratio = -1.0;
    double p = 0.0, q = 0.0, x = 0.0;
  };
  std::vector<Best> per_p(static_cast<std::size_t>(np));

  parallel_for(np, [&](long ip) {
    const double p = p_lo + ip * p_step;
    Best best;
    std::vector<long> candidates;
    for (long iq = 0; iq < nq; ++iq) {
      const double q = q_lo + iq * q_step;
      const double denom = std::abs(p - 1.0) + std::abs(q);
      // Excluded point (p,q) = (1,0), including its off-by-rounding grid
      // representations: below 1e-12 the CDF difference is rounding noise.
      if (denom < 1e-12) continue;

      candidates.clear();
      candidates.push_back(0);
      candidates.push_back(nx - 1);
      auto push_near = [&](double root) {
        const long i = static_cast<long>(std::floor((root - x_lo) / x_step));
        for (long j : {i, i + 1})
          if (j >= 0 && j < nx) candidates.push_back(j);
      };
      if (p == 1.0) {
        push_near(-q / 2.0);
      } else {
        // (p^2-1) x^2 + 2 p q x + (q^2 - ln p) = 0
        const double a2 = p * p - 1.0;
        const double a1 = 2.0 * p * q;
        const double a0 = q * q - std::log(p);
        const double disc = a1 * a1 - 4.0 * a2 * a0;
        if (disc >= 0.0) {
          const double root_sq = std::sqrt(disc);
          push_near((-a1 + root_sq) / (2.0 * a2));
          push_near((-a1 - root_sq) / (2.0 * a2));
        }
      }
      for (long ix : candidates) {
        const double x = x_at(ix);
        const double ratio = cdf_gap(p, q, x) / denom;
        if (ratio > best.ratio) best = {ratio, p, q, x};
      }
    }
    per_p[static_cast<std::size_t>(ip)] = best;
  });

  NormalPerturbationReport report;
  for (const Best& b : per_p) {
    if (b.ratio > report.max_ratio) {
      report.max_ratio = b.ratio;
      report.p = b.p;
      report.q = b.q;
      report.x = b.x;
    }
  }

  // Proof majorant: (1/sqrt(pi)) max(|x|,1) e^{-m(x)^2}, m(x) = max(0,|x|/2-1).
  for (long ix = 0; ix < nx; ++ix) {
    const double x = x_at(ix);
    const double m = std::max(0.0, std::abs(x) / 2.0 - 1.0);
    const double g = std::max(std::abs(x), 1.0) * std::exp(-m * m) /
                     std::sqrt(std::numbers::pi);
    if (g > report.majorant_max) {
      report.majorant_max = g;
      report.majorant_x = x;
    }
  }
  return report;
}

BerryEsseenParts berry_esseen_rhs_parts(const CoefficientSequence& a, const BoundParams& params,
                                 int n) {
  if (params.delta < 1.0)
    throw DeltaTooSmall("berry_esseen_rhs: delta must be >= 1");
  if (std::abs(params.lambda) >= 1.0)
    throw LambdaNotContractive("berry_esseen_rhs: |lambda| >= 1");
  if (n < 1 || n > a.length())
    throw std::invalid_argument("berry_esseen_rhs: N outside 1..length(a)");

  CompensatedSum<double> sum_sq, sum_quad;
  Complex b_n = 0.0;
  for (int k = 0; k < n; ++k) {
    const double m2 = std::norm(a.values[k]);
    sum_sq.add(m2);
    sum_quad.add(m2 * m2);
    b_n = params.lambda * b_n + a.values[k];  // sum lambda^{N-k} a_k
  }
  if (!(sum_sq.value() > 0.0)) throw AllZero("berry_esseen_rhs: sum |a_n|^2 vanishes");

  BerryEsseenParts parts;
  parts.exponent_quartic = (1.0 + params.delta) / (6.0 + 4.0 * params.delta);
  parts.exponent_quadratic = (1.0 + params.delta) / (3.0 + 2.0 * params.delta);
  parts.fluctuation = params.c_user * std::pow(sum_quad.value(), parts.exponent_quartic) *
                      std::pow(sum_sq.value(), -parts.exponent_quadratic);
  parts.abs_b_n = std::abs(b_n);
  const double l = std::abs(params.lambda);
  parts.remainder = 2.7 * (l / (1.0 - l)) * parts.abs_b_n / std::sqrt(sum_sq.value());
  return parts;
}

CramerWoldResult cramer_wold_discrepancy(const ComplexSamples& z, int alpha_count) {
  if (z.count() < 1) throw EmptySample("cramer_wold_discrepancy: no samples");
  if (alpha_count < 4)
    throw std::invalid_argument("cramer_wold_discrepancy: alpha_count < 4");

  std::vector<double> per_alpha(static_cast<std::size_t>(alpha_count));
  parallel_for(alpha_count, [&](long j) {
    const Complex alpha = std::polar(1.0, kTwoPi * j / alpha_count);
    RArray projected(z.count());
    for (long i = 0; i < z.count(); ++i) projected[i] = (alpha * z.values[i]).real();
    const SampleBatch batch = make_sample_batch(std::move(projected), z.seed);
    per_alpha[static_cast<std::size_t>(j)] =
        ks_distance(batch, [](double x) { return normal_half_cdf(x); });
  });

  CramerWoldResult result;
  for (int j = 0; j < alpha_count; ++j) {
    if (per_alpha[static_cast<std::size_t>(j)] > result.sup_discrepancy) {
      result.sup_discrepancy = per_alpha[static_cast<std::size_t>(j)];
      result.worst_alpha = std::polar(1.0, kTwoPi * j / alpha_count);
    }
  }
  return result;
}

PerturbationDiagnostics perturbation_diagnostics(const TransferredSequence& b) {
  const double one_minus = 1.0 - std::norm(b.lambda);
  PerturbationDiagnostics d;
  d.p = b.sigma / (std::sqrt(one_minus) * b.rho);
  d.q = std::abs(b.lambda) / std::sqrt(one_minus) * std::abs(b.last()) / b.rho;
  return d;
}

}  // namespace innerclt
