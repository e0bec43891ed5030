#pragma once

#include <vector>

#include "innerclt/blaschke.hpp"
#include "innerclt/types.hpp"

namespace innerclt {

// Equispaced nodes e^{2 pi i j / M} with M a power of two, M >= 2^10.
// Quadrature over the grid integrates z^k exactly for |k| < M.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(int log2_size);

  int size() const { return size_; }
  const CArray& nodes() const { return nodes_; }
  // Node at index j mod M; monomial values z^k on the grid are nodes of
  // index j*k mod M, exact in the group structure.
  Complex node(long j) const {
    long r = j % size_;
    if (r < 0) r += size_;
    return nodes_[r];
  }

 private:
  int size_;
  CArray nodes_;
};

// (1/M) sum_j g_j conj(h_j), compensated.
Complex inner_product(const CArray& g, const CArray& h, const QuadratureGrid& grid);

// sqrt((1/M) sum_j |v_j|^2)
double grid_l2(const CArray& v, const QuadratureGrid& grid);

Complex grid_mean(const CArray& v, const QuadratureGrid& grid);

// <h, z^k> by index arithmetic on the nodes (monomials are exact on the grid).
Complex fourier_coefficient(const CArray& h, long k, const QuadratureGrid& grid);

// f∘n sampled at the nodes, renormalized to the circle after each step.
// n = 0 samples the identity.
CArray sample_iterate(const BlaschkeProduct& f, int n, const QuadratureGrid& grid);

// <z^j, f^k> for k = 1..k_max (powers of f, not iterates). For an inner f with
// f(0) = 0 these are [lambda, 0, ...] for j = 1 and [mu, lambda^2, 0, ...] for j = 2.
std::vector<Complex> power_inner_products(const BlaschkeProduct& f, int j, int k_max,
                                          const QuadratureGrid& grid);

// Orthogonal projection of h onto span{eta^k : |k| <= K} under grid quadrature.
struct ProjectionResult {
  int truncation = 0;          // K
  CArray coefficients;         // index k + K holds <h, eta^k>, k in [-K, K]
  CArray projected;            // sum_k <h, eta^k> eta^k on the grid
  double residual = 0.0;       // grid L2 distance between h and the projection

  Complex coefficient(int k) const { return coefficients[k + truncation]; }
  // |c_{-K}| v |c_{+K}|: basis-truncation tail check
  double tail_magnitude() const;
};

// eta must be unimodular on the grid (it is renormalized defensively);
// eta_bandwidth is the frequency content of eta (the degree, for a finite
// Blaschke product). Rejects 4 * K * eta_bandwidth > M.
ProjectionResult conditional_expectation(const CArray& h, const CArray& eta,
                                         int truncation, const QuadratureGrid& grid,
                                         long eta_bandwidth);

// Grid L2 residuals of the reverse-martingale identities for
// Y_n = f∘n - lambda f∘(n+1),
// conditioning on the sigma-algebra of f∘(n+1) via the projection above:
//   mean          E[Y_n | F_{n+1}]          vs 0
//   second_moment E[|Y_n|^2 | F_{n+1}]      vs 1 - |lambda|^2
//   square        E[Y_n^2 | F_{n+1}]        vs mu f∘(n+1)
//   real_part     E[(Re a Y_n)^2 | F_{n+1}] vs (1-|l|^2)|a|^2/2 + Re(a^2 mu f∘(n+1))/2
struct MartingaleResiduals {
  double mean = 0.0;
  double second_moment = 0.0;
  double square = 0.0;
  double real_part = 0.0;
  double tail = 0.0;  // max projection tail coefficient across the four checks
};

MartingaleResiduals verify_martingale_identities(const BlaschkeProduct& f, int n,
                                                 UnitComplex alpha,
                                                 const QuadratureGrid& grid,
                                                 int truncation = 8);

}  // namespace innerclt
