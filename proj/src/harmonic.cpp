#include "innerclt/harmonic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace innerclt {

namespace {

void check_same_grid(const CArray& g, const CArray& h, const QuadratureGrid& grid) {
  if (g.size() != grid.size() || h.size() != grid.size())
    throw GridMismatch("grid functions sampled on different grids (sizes " +
                       std::to_string(g.size()) + ", " + std::to_string(h.size()) +
                       " vs M = " + std::to_string(grid.size()) + ")");
}

void check_nyquist(long bandwidth, const QuadratureGrid& grid) {
  if (4 * bandwidth > grid.size())
    throw NyquistViolation("frequency content " + std::to_string(bandwidth) +
                           " exceeds M/4 = " + std::to_string(grid.size() / 4));
}

// degree(f)^n with overflow clamp; iterate bandwidths grow geometrically.
long iterate_bandwidth(const BlaschkeProduct& f, int n) {
  long band = 1;
  for (int k = 0; k < n; ++k) {
    if (band > (1L << 40)) return 1L << 40;
    band *= f.degree();
  }
  return band;
}

}  // namespace

QuadratureGrid::QuadratureGrid(int log2_size) {
  if (log2_size < 10 || log2_size > 26)
    throw std::invalid_argument("QuadratureGrid: log2 size must lie in [10, 26]");
  size_ = 1 << log2_size;
  nodes_.resize(size_);
  const double step = kTwoPi / size_;
  for (int j = 0; j < size_; ++j) nodes_[j] = std::polar(1.0, step * j);
}

Complex inner_product(const CArray& g, const CArray& h, const QuadratureGrid& grid) {
  check_same_grid(g, h, grid);
  CompensatedSum<Complex> acc;
  for (int j = 0; j < grid.size(); ++j) acc.add(g[j] * std::conj(h[j]));
  return acc.value() / static_cast<double>(grid.size());
}

double grid_l2(const CArray& v, const QuadratureGrid& grid) {
  if (v.size() != grid.size())
    throw GridMismatch("grid_l2: size " + std::to_string(v.size()) + " vs M = " +
                       std::to_string(grid.size()));
  return std::sqrt(sum_abs2(v) / grid.size());
}

Complex grid_mean(const CArray& v, const QuadratureGrid& grid) {
  if (v.size() != grid.size()) throw GridMismatch("grid_mean: size mismatch");
  CompensatedSum<Complex> acc;
  for (int j = 0; j < grid.size(); ++j) acc.add(v[j]);
  return acc.value() / static_cast<double>(grid.size());
}

Complex fourier_coefficient(const CArray& h, long k, const QuadratureGrid& grid) {
  if (h.size() != grid.size()) throw GridMismatch("fourier_coefficient: size mismatch");
  CompensatedSum<Complex> acc;
  for (long j = 0; j < grid.size(); ++j) acc.add(h[j] * std::conj(grid.node(j * k)));
  return acc.value() / static_cast<double>(grid.size());
}

CArray sample_iterate(const BlaschkeProduct& f, int n, const QuadratureGrid& grid) {
  if (n < 0) throw std::invalid_argument("sample_iterate: n < 0");
  CArray values = grid.nodes();
  for (int step = 0; step < n; ++step) {
    for (int j = 0; j < grid.size(); ++j) {
      Complex w = blaschke_eval(f, values[j]);
      values[j] = w / std::abs(w);
    }
  }
  return values;
}

std::vector<Complex> power_inner_products(const BlaschkeProduct& f, int j, int k_max,
                                          const QuadratureGrid& grid) {
  if (j != 1 && j != 2)
    throw std::invalid_argument("power_inner_products: j must be 1 or 2");
  if (k_max < 1) throw std::invalid_argument("power_inner_products: k_max < 1");
  check_nyquist(static_cast<long>(k_max) * f.degree(), grid);

  const CArray base = sample_iterate(f, 1, grid);
  CArray monomial = grid.nodes();
  if (j == 2) monomial *= grid.nodes();

  std::vector<Complex> table;
  table.reserve(static_cast<std::size_t>(k_max));
  CArray power = base;
  for (int k = 1; k <= k_max; ++k) {
    table.push_back(inner_product(monomial, power, grid));
    if (k < k_max) power *= base;
  }
  return table;
}

double ProjectionResult::tail_magnitude() const {
  return std::max(std::abs(coefficients[0]),
                  std::abs(coefficients[coefficients.size() - 1]));
}

ProjectionResult conditional_expectation(const CArray& h, const CArray& eta,
                                         int truncation, const QuadratureGrid& grid,
                                         long eta_bandwidth) {
  check_same_grid(h, eta, grid);
  if (truncation < 1) throw std::invalid_argument("conditional_expectation: K < 1");
  check_nyquist(static_cast<long>(truncation) * eta_bandwidth, grid);

  const CArray eta_unit = eta / eta.abs().cast<Complex>();

  ProjectionResult result;
  result.truncation = truncation;
  result.coefficients = CArray::Zero(2 * truncation + 1);
  result.projected = CArray::Zero(grid.size());

  // Nonnegative powers eta^k; negative powers are conjugates (eta unimodular).
  CArray power = CArray::Ones(grid.size());
  for (int k = 0; k <= truncation; ++k) {
    const Complex c_pos = inner_product(h, power, grid);
    result.coefficients[truncation + k] = c_pos;
    result.projected += c_pos * power;
    if (k > 0) {
      const Complex c_neg = inner_product(h, power.conjugate().eval(), grid);
      result.coefficients[truncation - k] = c_neg;
      result.projected += c_neg * power.conjugate();
    }
    if (k < truncation) power *= eta_unit;
  }
  result.residual = grid_l2((h - result.projected).eval(), grid);
  return result;
}

MartingaleResiduals verify_martingale_identities(const BlaschkeProduct& f, int n,
                                                 UnitComplex alpha,
                                                 const QuadratureGrid& grid,
                                                 int truncation) {
  if (n < 1) throw std::invalid_argument("verify_martingale_identities: n < 1");
  const long eta_band = iterate_bandwidth(f, n + 1);
  check_nyquist(static_cast<long>(truncation) * eta_band, grid);

  const SchwarzPickData sp = schwarz_pick_data(f);
  const CArray fn = sample_iterate(f, n, grid);
  CArray eta(grid.size());  // f∘(n+1), advanced from f∘n
  for (int j = 0; j < grid.size(); ++j) {
    const Complex w = blaschke_eval(f, fn[j]);
    eta[j] = w / std::abs(w);
  }

  const CArray y = fn - sp.lambda * eta;
  const Complex a = alpha.value();

  auto project = [&](const CArray& target) {
    return conditional_expectation(target, eta, truncation, grid, eta_band);
  };

  const ProjectionResult mean_proj = project(y);
  const ProjectionResult abs_proj = project(y.abs2().cast<Complex>().eval());
  const ProjectionResult square_proj = project((y * y).eval());
  const CArray re_ay_sq = (a * y).real().square().cast<Complex>();
  const ProjectionResult real_proj = project(re_ay_sq);

  const double one_minus = 1.0 - std::norm(sp.lambda);
  const CArray real_claim = Complex(0.5 * one_minus * std::norm(a)) +
                            Complex(0.5) * (a * a * sp.mu * eta).real().cast<Complex>();

  MartingaleResiduals res;
  res.mean = grid_l2(mean_proj.projected, grid);
  res.second_moment = grid_l2((abs_proj.projected - Complex(one_minus)).eval(), grid);
  res.square = grid_l2((square_proj.projected - sp.mu * eta).eval(), grid);
  res.real_part = grid_l2((real_proj.projected - real_claim).eval(), grid);
  res.tail = std::max({mean_proj.tail_magnitude(), abs_proj.tail_magnitude(),
                       square_proj.tail_magnitude(), real_proj.tail_magnitude()});
  return res;
}

}  // namespace innerclt
