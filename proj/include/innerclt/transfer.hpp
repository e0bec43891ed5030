#pragma once

#include <cstdint>

#include "innerclt/types.hpp"

namespace innerclt {

// Finite complex sequence a_1..a_N with its compensated power sums.
struct CoefficientSequence {
  CArray values;           // a_n at index n-1
  double abs_sum = 0.0;    // S_N = sum |a_n|
  double sum_sq = 0.0;     // sum |a_n|^2
  double sum_quad = 0.0;   // sum |a_n|^4

  int length() const { return static_cast<int>(values.size()); }
};

CoefficientSequence make_coefficients(CArray values);

// Named generator families addressable from the CLI.
CoefficientSequence family_ones(int n);
CoefficientSequence family_sqrt(int n);                       // a_k = sqrt(k)
CoefficientSequence family_geometric(double ratio, int n);    // a_k = ratio^k
CoefficientSequence family_random(std::uint64_t seed, int n); // i.i.d. CN(0,1)

// b_n = sum_{k<=n} lambda^{n-k} a_k, with
//   rho^2   = sum |b_n|^2
//   sigma^2 = (1-|lambda|^2) rho^2 + |lambda|^2 |b_N|^2,
// the exact L2 norm of sum a_n f∘n for any inner f with Schwarz-Pick
// derivative data lambda. The squares are the stored quantities; rho and
// sigma are their roots.
struct TransferredSequence {
  CArray values;  // b_n at index n-1
  Complex lambda{};
  double rho_sq = 0.0;
  double sigma_sq = 0.0;
  double rho = 0.0;
  double sigma = 0.0;

  int length() const { return static_cast<int>(values.size()); }
  Complex last() const { return values[values.size() - 1]; }
};

TransferredSequence transfer(const CoefficientSequence& a, Complex lambda);

// a_1 = b_1, a_n = b_n - lambda b_{n-1}; exact inverse of transfer.
CoefficientSequence invert_transfer(const TransferredSequence& b);

// Finite-N reading of the norm equivalences. The two-sided sigma bounds are
// exact at finite N; the ell2 lower bound on ||b|| needs the tail mass
// |lambda|^2 |b_N|^2 / (1-|lambda|^2) of the transferred sequence beyond N.
struct NormBoundsReport {
  bool lower_ok = false;        // ||a||/(1+|l|) <= sqrt(||b||^2 + tail_slack)
  bool upper_ok = false;        // ||b|| <= ||a||/(1-|l|)
  bool sigma_lower_ok = false;  // (1-|l|)/(1+|l|) ||a||^2 <= sigma^2
  bool sigma_upper_ok = false;  // sigma^2 <= (1+|l|)/(1-|l|) ||a||^2
  double ratio = 0.0;           // ||b|| / ||a||
  double lower_bound = 0.0;     // 1/(1+|l|)
  double upper_bound = 0.0;     // 1/(1-|l|)
  double sigma_ratio = 0.0;     // sigma^2 / ||a||^2
  double tail_slack = 0.0;

  bool all_ok() const { return lower_ok && upper_ok && sigma_lower_ok && sigma_upper_ok; }
};

NormBoundsReport norm_bounds_check(const CoefficientSequence& a, Complex lambda);

struct LindebergRatios {
  double last_ratio = 0.0;  // |a_N|^2 / sum |a_n|^2
  double max_ratio = 0.0;   // max_n |a_n|^2 / sum |a_n|^2
};

LindebergRatios lindeberg_ratios(const CoefficientSequence& a);

// max_z |A_N(z) - (1 - lambda z) B_N(z) - lambda b_N z^{N+1}| over the given
// boundary samples, all three polynomials Horner-evaluated.
double generating_identity_check(const CoefficientSequence& a, Complex lambda,
                                 const CArray& z_samples);

}  // namespace innerclt
