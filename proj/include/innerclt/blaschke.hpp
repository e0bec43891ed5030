#pragma once

#include <vector>

#include "innerclt/types.hpp"

namespace innerclt {

// Zeros closer to the circle than this default cap are rejected: their
// factors cancel catastrophically at the boundary.
inline constexpr double kDefaultZeroCap = 0.95;

// Finite Blaschke product vanishing at the origin,
//
//   f(z) = rotation * prod_j factor(a_j, z),
//
// with factor(0, z) = z and factor(a, z) = (|a|/a) (a - z) / (1 - conj(a) z).
// The normalization makes each nonzero factor map 0 to |a| > 0. At least one
// zero must be exactly 0 (so f(0) = 0) and the degree must be at least 2
// (degree 1 would be a rotation).
class BlaschkeProduct {
 public:
  explicit BlaschkeProduct(std::vector<Complex> zeros, Complex rotation = Complex(1.0),
                           double zero_cap = kDefaultZeroCap);

  // z^d
  static BlaschkeProduct monomial(int degree);
  // z * b_a, the degree-2 workhorse of the test suites
  static BlaschkeProduct zero_times_factor(Complex a);

  int degree() const { return static_cast<int>(zeros_.size()); }
  const std::vector<Complex>& zeros() const { return zeros_; }
  Complex rotation() const { return rotation_; }
  double zero_cap() const { return zero_cap_; }

 private:
  std::vector<Complex> zeros_;
  Complex rotation_;
  double zero_cap_;
};

// One Moebius factor, (|a|/a)(a - z)/(1 - conj(a) z); factor(0, z) = z.
Complex blaschke_factor(Complex a, Complex z);

// Evaluate f anywhere on the closed disc (|z| <= 1 + 1e-12).
Complex blaschke_eval(const BlaschkeProduct& f, Complex z);

// Boundary evaluation: result renormalized to the circle.
UnitComplex boundary_eval(const BlaschkeProduct& f, UnitComplex w);

struct SchwarzPickData {
  Complex lambda;  // conj(f'(0)), |lambda| < 1
  Complex mu;      // conj(f''(0))/2, |mu| <= 1 - |lambda|^2
};

// Closed-form Taylor data at the origin (no finite differences).
SchwarzPickData schwarz_pick_data(const BlaschkeProduct& f);

// n-th iterate on the circle, renormalized after every step; n = 0 returns w.
UnitComplex iterate_boundary(const BlaschkeProduct& f, UnitComplex w, int n);

// [f(w), f∘2(w), ..., f∘n_max(w)] in one sequential pass.
std::vector<UnitComplex> orbit_row(const BlaschkeProduct& f, UnitComplex w, int n_max);

}  // namespace innerclt
