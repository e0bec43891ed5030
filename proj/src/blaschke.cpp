#include "innerclt/blaschke.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace innerclt {

BlaschkeProduct::BlaschkeProduct(std::vector<Complex> zeros, Complex rotation,
                                 double zero_cap)
    : zeros_(std::move(zeros)), rotation_(rotation), zero_cap_(zero_cap) {
  if (!(zero_cap_ > 0.0) || zero_cap_ >= 1.0)
    throw std::invalid_argument("BlaschkeProduct: zero cap must lie in (0, 1)");
  if (zeros_.size() < 2)
    throw RotationInput("BlaschkeProduct: degree " + std::to_string(zeros_.size()) +
                        " < 2; a degree-1 product with f(0)=0 is a rotation");
  bool has_origin_zero = false;
  for (const Complex& a : zeros_) {
    const double r = std::abs(a);
    if (r >= 1.0)
      throw ZeroOnBoundary("BlaschkeProduct: zero with |a| = " + std::to_string(r) +
                           " not interior to the disc");
    if (r > zero_cap_)
      throw ZeroOnBoundary("BlaschkeProduct: |a| = " + std::to_string(r) +
                           " exceeds the construction cap " + std::to_string(zero_cap_));
    if (a == Complex(0.0)) has_origin_zero = true;
  }
  if (!has_origin_zero)
    throw std::invalid_argument("BlaschkeProduct: needs a zero exactly at the origin");

  if (std::abs(std::abs(rotation_) - 1.0) > kUnitModulusTol)
    throw std::invalid_argument("BlaschkeProduct: rotation factor must be unimodular");
}

BlaschkeProduct BlaschkeProduct::monomial(int degree) {
  if (degree < 2) throw RotationInput("BlaschkeProduct::monomial: degree < 2");
  return BlaschkeProduct(std::vector<Complex>(static_cast<std::size_t>(degree), Complex(0.0)));
}

BlaschkeProduct BlaschkeProduct::zero_times_factor(Complex a) {
  return BlaschkeProduct({Complex(0.0), a});
}

Complex blaschke_factor(Complex a, Complex z) {
  if (a == Complex(0.0)) return z;
  const double r = std::abs(a);
  return (r / a) * (a - z) / (1.0 - std::conj(a) * z);
}

Complex blaschke_eval(const BlaschkeProduct& f, Complex z) {
  if (std::abs(z) > 1.0 + 1e-12)
    throw std::invalid_argument("blaschke_eval: |z| > 1");
  Complex value = f.rotation();
  for (const Complex& a : f.zeros()) value *= blaschke_factor(a, z);
  return value;
}

UnitComplex boundary_eval(const BlaschkeProduct& f, UnitComplex w) {
  return UnitComplex::normalized(blaschke_eval(f, w.value()));
}

SchwarzPickData schwarz_pick_data(const BlaschkeProduct& f) {
  // Multiply the factor Taylor series at 0 truncated past z^2. For a != 0 the
  // factor expands as |a| + (|a|^2-1)(|a|/a) z + conj(a)(|a|^2-1)(|a|/a) z^2 + ...
  Complex c0 = f.rotation(), c1 = 0.0, c2 = 0.0;
  for (const Complex& a : f.zeros()) {
    Complex f0, f1, f2;
    if (a == Complex(0.0)) {
      f0 = 0.0;
      f1 = 1.0;
      f2 = 0.0;
    } else {
      const double r = std::abs(a);
      f0 = r;
      f1 = (r * r - 1.0) * (r / a);
      f2 = std::conj(a) * f1;
    }
    const Complex n2 = c0 * f2 + c1 * f1 + c2 * f0;
    const Complex n1 = c0 * f1 + c1 * f0;
    const Complex n0 = c0 * f0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
  }
  SchwarzPickData data{std::conj(c1), std::conj(c2)};
  if (std::abs(data.lambda) >= 1.0)
    throw RotationInput("schwarz_pick_data: |f'(0)| reached 1");
  if (std::abs(data.mu) > 1.0 - std::norm(data.lambda) + 1e-10)
    throw Error("schwarz_pick_data: Schwarz-Pick inequality violated numerically");
  return data;
}

UnitComplex iterate_boundary(const BlaschkeProduct& f, UnitComplex w, int n) {
  if (n < 0) throw std::invalid_argument("iterate_boundary: n < 0");
  UnitComplex z = w;
  for (int k = 0; k < n; ++k) z = boundary_eval(f, z);
  return z;
}

std::vector<UnitComplex> orbit_row(const BlaschkeProduct& f, UnitComplex w, int n_max) {
  if (n_max < 1) throw std::invalid_argument("orbit_row: n_max < 1");
  std::vector<UnitComplex> orbit;
  orbit.reserve(static_cast<std::size_t>(n_max));
  UnitComplex z = w;
  for (int n = 1; n <= n_max; ++n) {
    z = boundary_eval(f, z);
    orbit.push_back(z);
  }
  return orbit;
}

}  // namespace innerclt
