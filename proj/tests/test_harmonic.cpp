#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "innerclt/harmonic.hpp"
#include "oracle_helpers.hpp"

using namespace innerclt;

namespace {

const BlaschkeProduct kSquare = BlaschkeProduct::monomial(2);
const BlaschkeProduct kHalf = BlaschkeProduct::zero_times_factor(Complex(0.5));

}  // namespace

TEST_CASE("grid construction enforces the size contract") {
  CHECK_THROWS_AS(QuadratureGrid(9), std::invalid_argument);
  const QuadratureGrid grid(10);
  CHECK(grid.size() == 1024);
  CHECK(std::abs(grid.node(0) - Complex(1.0)) == 0.0);
  CHECK(std::abs(grid.node(grid.size() / 2) - Complex(-1.0)) <= 1e-15);
}

TEST_CASE("grid quadrature integrates monomials exactly") {
  const QuadratureGrid grid(14);
  const int m = grid.size();
  for (const long k :
       {0L, 1L, 2L, 7L, 100L, 8191L, static_cast<long>(m - 1), -1L, -57L}) {
    CArray z_k(m);
    for (long j = 0; j < m; ++j) z_k[j] = grid.node(j * k);
    const Complex integral = grid_mean(z_k, grid);
    const Complex expected = k == 0 ? Complex(1.0) : Complex(0.0);
    CHECK(std::abs(integral - expected) <= 1e-13);
  }
}

TEST_CASE("inner_product: constants, monomials, and the lambda entry") {
  const QuadratureGrid grid(14);
  const CArray ones = CArray::Ones(grid.size());
  CHECK(std::abs(inner_product(ones, ones, grid) - Complex(1.0)) <= 1e-15);

  const CArray z = grid.nodes();
  const CArray z_sq = (grid.nodes() * grid.nodes()).eval();
  CHECK(std::abs(inner_product(z, z_sq, grid)) <= 1e-13);

  // <f∘1, f∘2> = lambda for f = z b_{1/2}
  const CArray f1 = sample_iterate(kHalf, 1, grid);
  const CArray f2 = sample_iterate(kHalf, 2, grid);
  CHECK(std::abs(inner_product(f1, f2, grid) - Complex(0.5)) <= 1e-8);
}

TEST_CASE("inner_product rejects mismatched grids") {
  const QuadratureGrid grid(14);
  const CArray small = CArray::Ones(1024);
  CHECK_THROWS_AS(inner_product(small, small, grid), GridMismatch);
}

TEST_CASE("power_inner_products reproduces the coefficient tables") {
  const QuadratureGrid grid(14);

  const auto t1 = power_inner_products(kSquare, 1, 6, grid);
  for (const Complex& v : t1) CHECK(std::abs(v) <= 1e-10);

  const auto t2 = power_inner_products(kSquare, 2, 6, grid);
  CHECK(std::abs(t2[0] - Complex(1.0)) <= 1e-10);
  for (std::size_t k = 1; k < t2.size(); ++k) CHECK(std::abs(t2[k]) <= 1e-10);

  // f = z b_{1/2}: [mu, lambda^2, 0, ...] = [-0.75, 0.25, 0, ...]
  const auto th = power_inner_products(kHalf, 2, 6, grid);
  CHECK(std::abs(th[0] - Complex(-0.75)) <= 1e-8);
  CHECK(std::abs(th[1] - Complex(0.25)) <= 1e-8);
  for (std::size_t k = 2; k < th.size(); ++k) CHECK(std::abs(th[k]) <= 1e-8);

  // cross-module agreement with the Taylor data
  const SchwarzPickData sp = schwarz_pick_data(kHalf);
  const auto tl = power_inner_products(kHalf, 1, 4, grid);
  CHECK(std::abs(tl[0] - sp.lambda) <= 1e-8);
  CHECK(std::abs(th[0] - sp.mu) <= 1e-8);
  CHECK(std::abs(th[1] - sp.lambda * sp.lambda) <= 1e-8);
}

TEST_CASE("power_inner_products rejects content beyond the Nyquist margin") {
  const QuadratureGrid grid(10);
  CHECK_THROWS_AS(power_inner_products(kSquare, 1, 200, grid), NyquistViolation);
}

TEST_CASE("conditional_expectation: constants are measurable") {
  const QuadratureGrid grid(12);
  const CArray eta = sample_iterate(kHalf, 1, grid);
  const CArray h = CArray::Ones(grid.size());
  const ProjectionResult p = conditional_expectation(h, eta, 4, grid, kHalf.degree());
  CHECK(std::abs(p.coefficient(0) - Complex(1.0)) <= 1e-12);
  for (int k = -4; k <= 4; ++k)
    if (k != 0) CHECK(std::abs(p.coefficient(k)) <= 1e-12);
  CHECK((p.projected - h).abs().maxCoeff() <= 1e-12);
  CHECK(p.residual <= 1e-12);
}

TEST_CASE("conditional_expectation reproduces the iterate projections") {
  const QuadratureGrid grid(14);
  const SchwarzPickData sp = schwarz_pick_data(kHalf);
  for (int n = 1; n <= 3; ++n) {
    const CArray fn = sample_iterate(kHalf, n, grid);
    const CArray eta = sample_iterate(kHalf, n + 1, grid);
    const long band = 1L << (n + 1);  // degree-2 iterate

    // E[f∘n | F_{n+1}] = lambda f∘(n+1)
    const ProjectionResult p1 = conditional_expectation(fn, eta, 6, grid, band);
    CHECK(grid_l2((p1.projected - sp.lambda * eta).eval(), grid) <= 1e-7);

    // E[(f∘n)^2 | F_{n+1}] = mu f∘(n+1) + lambda^2 (f∘(n+1))^2
    const ProjectionResult p2 =
        conditional_expectation((fn * fn).eval(), eta, 6, grid, band);
    const CArray claim = sp.mu * eta + sp.lambda * sp.lambda * eta * eta;
    CHECK(grid_l2((p2.projected - claim).eval(), grid) <= 1e-7);
  }
}

TEST_CASE("projection satisfies Bessel and idempotence") {
  const QuadratureGrid grid(13);
  const CArray fn = sample_iterate(kHalf, 2, grid);
  const CArray eta = sample_iterate(kHalf, 3, grid);
  const ProjectionResult once = conditional_expectation(fn, eta, 5, grid, 8);

  double coeff_mass = 0.0;
  for (int k = -5; k <= 5; ++k) coeff_mass += std::norm(once.coefficient(k));
  const double h_mass = grid_l2(fn, grid) * grid_l2(fn, grid);
  CHECK(coeff_mass <= h_mass + 1e-8);

  const ProjectionResult twice = conditional_expectation(once.projected, eta, 5, grid, 8);
  CHECK((twice.coefficients - once.coefficients).abs().maxCoeff() <= 1e-10);
  CHECK(twice.residual <= 1e-10);
}

TEST_CASE("powers of a sampled inner function stay orthonormal (Gram audit)") {
  const QuadratureGrid grid(14);
  const CArray eta = sample_iterate(kHalf, 2, grid);
  const int k_max = 6;
  std::vector<CArray> powers;
  powers.push_back(CArray::Ones(grid.size()));
  for (int k = 1; k <= k_max; ++k) powers.push_back((powers.back() * eta).eval());
  for (int k = -k_max; k <= k_max; ++k) {
    for (int l = -k_max; l <= k_max; ++l) {
      const CArray pk = k >= 0 ? powers[k] : powers[-k].conjugate();
      const CArray pl = l >= 0 ? powers[l] : powers[-l].conjugate();
      const Complex gram = inner_product(pk, pl, grid);
      const Complex expected = k == l ? Complex(1.0) : Complex(0.0);
      CHECK(std::abs(gram - expected) <= 1e-8);
    }
  }
}

TEST_CASE("sampled powers of f are analytic (no negative frequencies)") {
  const QuadratureGrid grid(14);
  const CArray f1 = sample_iterate(kHalf, 1, grid);
  CArray power = f1;
  for (int k = 1; k <= 4; ++k) {
    for (const long freq : {-1L, -2L, -5L, -37L})
      CHECK(std::abs(fourier_coefficient(power, freq, grid)) <= 1e-8);
    power *= f1;
  }
}

TEST_CASE("martingale identities: z^2 makes them explicit") {
  const QuadratureGrid grid(14);
  const MartingaleResiduals r =
      verify_martingale_identities(kSquare, 1, UnitComplex::from_angle(0.0), grid);
  CHECK(r.mean <= 1e-8);
  CHECK(r.second_moment <= 1e-8);
  CHECK(r.square <= 1e-8);
  CHECK(r.real_part <= 1e-8);
}

TEST_CASE("martingale identities hold for z b_{1/2}") {
  const QuadratureGrid grid(14);
  const MartingaleResiduals r1 =
      verify_martingale_identities(kHalf, 1, UnitComplex::from_angle(0.0), grid);
  CHECK(r1.mean <= 1e-7);
  CHECK(r1.second_moment <= 1e-7);
  CHECK(r1.square <= 1e-7);
  CHECK(r1.real_part <= 1e-7);

  const UnitComplex alpha_i = UnitComplex::from_angle(kTwoPi / 4.0);
  const MartingaleResiduals r2 = verify_martingale_identities(kHalf, 2, alpha_i, grid);
  CHECK(r2.mean <= 1e-6);
  CHECK(r2.second_moment <= 1e-6);
  CHECK(r2.square <= 1e-6);
  CHECK(r2.real_part <= 1e-6);

  // doubling M is the convergence oracle: residuals must not grow
  const QuadratureGrid fine(15);
  const MartingaleResiduals r2f = verify_martingale_identities(kHalf, 2, alpha_i, fine);
  CHECK(r2f.second_moment <= std::max(r2.second_moment, 1e-10));
  CHECK(r2f.square <= std::max(r2.square, 1e-10));
  CHECK(r2f.real_part <= std::max(r2.real_part, 1e-10));
}

TEST_CASE("martingale identities reject iterates beyond the Nyquist rule") {
  const QuadratureGrid grid(10);
  CHECK_THROWS_AS(verify_martingale_identities(BlaschkeProduct::monomial(3), 5,
                                               UnitComplex::from_angle(0.0), grid),
                  NyquistViolation);
}
