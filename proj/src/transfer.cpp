#include "innerclt/transfer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "innerclt/rng.hpp"

namespace innerclt {

CoefficientSequence make_coefficients(CArray values) {
  if (values.size() < 1)
    throw std::invalid_argument("make_coefficients: empty sequence");
  CoefficientSequence a;
  a.values = std::move(values);
  CompensatedSum<double> s1, s2, s4;
  for (Eigen::Index i = 0; i < a.values.size(); ++i) {
    const double m2 = std::norm(a.values[i]);
    s1.add(std::abs(a.values[i]));
    s2.add(m2);
    s4.add(m2 * m2);
  }
  a.abs_sum = s1.value();
  a.sum_sq = s2.value();
  a.sum_quad = s4.value();
  return a;
}

CoefficientSequence family_ones(int n) {
  return make_coefficients(CArray::Ones(n));
}

CoefficientSequence family_sqrt(int n) {
  CArray v(n);
  for (int k = 1; k <= n; ++k) v[k - 1] = std::sqrt(static_cast<double>(k));
  return make_coefficients(std::move(v));
}

CoefficientSequence family_geometric(double ratio, int n) {
  CArray v(n);
  Complex p = 1.0;
  for (int k = 1; k <= n; ++k) {
    p *= ratio;
    v[k - 1] = p;
  }
  return make_coefficients(std::move(v));
}

CoefficientSequence family_random(std::uint64_t seed, int n) {
  CArray v(n);
  for (int k = 0; k < n; ++k)
    v[k] = rng::complex_normal(seed, /*stream=*/0x636f6566ULL, static_cast<std::uint64_t>(k));
  return make_coefficients(std::move(v));
}

TransferredSequence transfer(const CoefficientSequence& a, Complex lambda) {
  if (std::abs(lambda) >= 1.0)
    throw LambdaNotContractive("transfer: |lambda| >= 1");
  TransferredSequence b;
  b.lambda = lambda;
  b.values.resize(a.values.size());
  Complex prev = 0.0;
  CompensatedSum<double> mass;
  for (Eigen::Index n = 0; n < a.values.size(); ++n) {
    prev = lambda * prev + a.values[n];
    b.values[n] = prev;
    mass.add(std::norm(prev));
  }
  b.rho_sq = mass.value();
  b.sigma_sq = (1.0 - std::norm(lambda)) * b.rho_sq + std::norm(lambda) * std::norm(b.last());
  b.rho = std::sqrt(b.rho_sq);
  b.sigma = std::sqrt(b.sigma_sq);
  return b;
}

CoefficientSequence invert_transfer(const TransferredSequence& b) {
  CArray a(b.values.size());
  a[0] = b.values[0];
  for (Eigen::Index n = 1; n < b.values.size(); ++n)
    a[n] = b.values[n] - b.lambda * b.values[n - 1];
  return make_coefficients(std::move(a));
}

NormBoundsReport norm_bounds_check(const CoefficientSequence& a, Complex lambda) {
  const TransferredSequence b = transfer(a, lambda);
  const double l = std::abs(lambda);
  const double a_norm = std::sqrt(a.sum_sq);

  NormBoundsReport report;
  report.lower_bound = 1.0 / (1.0 + l);
  report.upper_bound = 1.0 / (1.0 - l);
  report.ratio = a_norm > 0.0 ? b.rho / a_norm : 1.0;
  report.tail_slack = std::norm(lambda) * std::norm(b.last()) / (1.0 - std::norm(lambda));

  const double b_full_sq = b.rho_sq + report.tail_slack;
  report.lower_ok = a_norm * report.lower_bound <= std::sqrt(b_full_sq) * (1.0 + 1e-12);
  report.upper_ok = b.rho <= a_norm * report.upper_bound * (1.0 + 1e-12);

  report.sigma_ratio = a.sum_sq > 0.0 ? b.sigma_sq / a.sum_sq : 1.0;
  report.sigma_lower_ok =
      (1.0 - l) / (1.0 + l) * a.sum_sq <= b.sigma_sq * (1.0 + 1e-12) + 1e-300;
  report.sigma_upper_ok =
      b.sigma_sq <= (1.0 + l) / (1.0 - l) * a.sum_sq * (1.0 + 1e-12) + 1e-300;
  return report;
}

LindebergRatios lindeberg_ratios(const CoefficientSequence& a) {
  if (a.sum_sq <= 0.0)
    throw AllZero("lindeberg_ratios: all coefficients vanish");
  LindebergRatios r;
  r.last_ratio = std::norm(a.values[a.values.size() - 1]) / a.sum_sq;
  double max_sq = 0.0;
  for (Eigen::Index n = 0; n < a.values.size(); ++n)
    max_sq = std::max(max_sq, std::norm(a.values[n]));
  r.max_ratio = max_sq / a.sum_sq;
  return r;
}

double generating_identity_check(const CoefficientSequence& a, Complex lambda,
                                 const CArray& z_samples) {
  const TransferredSequence b = transfer(a, lambda);
  const Eigen::Index n = a.values.size();

  // Horner on c_1 z + ... + c_N z^N = z * (c_1 + z * (c_2 + ...)).
  auto eval_poly = [n](const CArray& c, Complex z) {
    Complex acc = 0.0;
    for (Eigen::Index k = n - 1; k >= 0; --k) acc = acc * z + c[k];
    return acc * z;
  };

  double worst = 0.0;
  for (Eigen::Index s = 0; s < z_samples.size(); ++s) {
    const Complex z = z_samples[s];
    const Complex lhs = eval_poly(a.values, z);
    Complex z_next = std::pow(z, static_cast<double>(n + 1));
    const Complex rhs = (1.0 - lambda * z) * eval_poly(b.values, z) +
                        lambda * b.last() * z_next;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace innerclt
