#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "innerclt/errors.hpp"

namespace innerclt {

using Complex = std::complex<double>;
using CArray = Eigen::ArrayXcd;  // grid functions, coefficient values
using RArray = Eigen::ArrayXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kUnitModulusTol = 1e-12;

// A point of the unit circle. |value()| stays within 1e-12 of one after
// every construction; normalized() snaps an off-circle value back.
class UnitComplex {
 public:
  explicit UnitComplex(Complex z) : value_(z) {
    if (std::abs(std::abs(z) - 1.0) > kUnitModulusTol)
      throw std::invalid_argument("UnitComplex: |z| deviates from 1 beyond 1e-12");
  }

  static UnitComplex from_angle(double theta) {
    return UnitComplex(std::polar(1.0, theta), unchecked_tag{});
  }

  // z / |z|; rejects z too close to the origin for the quotient to mean anything.
  static UnitComplex normalized(Complex z) {
    const double r = std::abs(z);
    if (!(r > 1e-300))
      throw std::invalid_argument("UnitComplex::normalized: |z| vanishes");
    return UnitComplex(z / r, unchecked_tag{});
  }

  Complex value() const { return value_; }
  double real() const { return value_.real(); }
  double imag() const { return value_.imag(); }
  double arg() const { return std::arg(value_); }

 private:
  struct unchecked_tag {};
  UnitComplex(Complex z, unchecked_tag) : value_(z) {}
  Complex value_;
};

// Compensated (Kahan) accumulator. Works for double and for
// std::complex<double>, whose + and - act componentwise.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    const T y = x - c_;
    const T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  T value() const { return s_; }

 private:
  T s_{};
  T c_{};
};

// Compensated sum of |v_i|^2 over an Eigen array expression.
template <typename Derived>
double sum_abs2(const Eigen::ArrayBase<Derived>& v) {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc.add(std::norm(Complex(v.derived()(i))));
  return acc.value();
}

}  // namespace innerclt
