#include "innerclt/verification.hpp"

#include <algorithm>
#include <cmath>

#include "innerclt/harmonic.hpp"
#include "innerclt/rng.hpp"
#include "innerclt/stats.hpp"

namespace innerclt {

namespace {

constexpr std::uint64_t kVerifyStream = 0x76657266ULL;

// Largest n such that the truncation-K projection for f∘(n+1) stays inside
// the Nyquist rule 4 K deg^(n+1) <= M.
int max_identity_order(const BlaschkeProduct& f, int truncation, int grid_size) {
  int n = 0;
  double band = f.degree();
  while (4.0 * truncation * band * f.degree() <= grid_size && n < 6) {
    ++n;
    band *= f.degree();
  }
  return n;
}

Complex random_interior_point(std::uint64_t seed, std::uint64_t counter, double cap) {
  const double r = cap * std::sqrt(rng::uniform01(seed, kVerifyStream, 2 * counter));
  const double theta = kTwoPi * rng::uniform01(seed, kVerifyStream, 2 * counter + 1);
  return std::polar(r, theta);
}

}  // namespace

std::vector<VerificationRow> run_verification(const ExperimentConfig& config) {
  std::vector<VerificationRow> rows;
  auto push = [&rows](const std::string& name, double residual, double tolerance) {
    rows.push_back({name, residual, tolerance, residual <= tolerance});
  };

  const BlaschkeProduct& f = config.f;
  const SchwarzPickData sp = schwarz_pick_data(f);
  const std::uint64_t seed = config.seed;

  // Boundary unimodularity before renormalization.
  {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const UnitComplex w = rng::unit_point(seed, kVerifyStream, 1000000 + i);
      worst = std::max(worst, std::abs(std::abs(blaschke_eval(f, w.value())) - 1.0));
    }
    push("unimodularity", worst, 1e-12);
  }

  push("schwarz_pick", std::max(0.0, std::abs(sp.mu) - (1.0 - std::norm(sp.lambda))),
       1e-10);

  // Quadrature mean of f∘n vanishes (f∘n(0) = 0).
  {
    const QuadratureGrid grid(14);
    double worst = 0.0;
    CArray it = grid.nodes();
    for (int n = 1; n <= 4; ++n) {
      for (int j = 0; j < grid.size(); ++j) {
        const Complex w = blaschke_eval(f, it[j]);
        it[j] = w / std::abs(w);
      }
      worst = std::max(worst, std::abs(grid_mean(it, grid)));
    }
    push("mean_zero_iterates", worst, 1e-8);
  }

  // Pushforward of the uniform law under the boundary map stays uniform.
  {
    const long draws = 100000;
    RArray args(draws);
    for (long i = 0; i < draws; ++i) {
      const UnitComplex w = rng::unit_point(seed, kVerifyStream, 2000000 + i);
      double t = boundary_eval(f, w).arg() / kTwoPi;
      if (t < 0.0) t += 1.0;
      args[i] = t;
    }
    const SampleBatch batch = make_sample_batch(std::move(args), seed);
    const double ks = ks_distance(batch, [](double x) {
      return std::clamp(x, 0.0, 1.0);
    });
    push("measure_preservation_ks", ks, 1.95 / std::sqrt(static_cast<double>(draws)));
  }

  // Reverse-martingale conditional-expectation identities.
  {
    const QuadratureGrid grid(14);
    const int truncation = 8;
    const int n_max = std::min(3, max_identity_order(f, truncation, grid.size()));
    const UnitComplex alphas[] = {UnitComplex::from_angle(0.0),
                                  UnitComplex::from_angle(kTwoPi / 4.0),
                                  UnitComplex::from_angle(kTwoPi / 10.0)};
    MartingaleResiduals worst;
    for (int n = 1; n <= n_max; ++n) {
      for (const UnitComplex& alpha : alphas) {
        const MartingaleResiduals r =
            verify_martingale_identities(f, n, alpha, grid, truncation);
        worst.mean = std::max(worst.mean, r.mean);
        worst.second_moment = std::max(worst.second_moment, r.second_moment);
        worst.square = std::max(worst.square, r.square);
        worst.real_part = std::max(worst.real_part, r.real_part);
      }
    }
    push("martingale_mean", worst.mean, 1e-6);
    push("martingale_second_moment", worst.second_moment, 1e-6);
    push("martingale_square", worst.square, 1e-6);
    push("martingale_real_part", worst.real_part, 1e-6);
  }

  // <z, f^k> = [lambda, 0, ...] and <z^2, f^k> = [mu, lambda^2, 0, ...].
  {
    const QuadratureGrid grid(14);
    const int k_max = 6;
    const auto t1 = power_inner_products(f, 1, k_max, grid);
    const auto t2 = power_inner_products(f, 2, k_max, grid);
    double worst1 = std::abs(t1[0] - sp.lambda);
    double worst2 = std::max(std::abs(t2[0] - sp.mu),
                             std::abs(t2[1] - sp.lambda * sp.lambda));
    for (int k = 2; k <= k_max; ++k) {
      worst1 = std::max(worst1, std::abs(t1[k - 1]));
      if (k >= 3) worst2 = std::max(worst2, std::abs(t2[k - 1]));
    }
    push("power_table_j1", worst1, 1e-7);
    push("power_table_j2", worst2, 1e-7);
  }

  // transfer / invert_transfer round-trips.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int len = 1 + static_cast<int>(rng::uniform01(seed, kVerifyStream,
                                                          3000000 + 3 * trial) * 200);
      CArray a(len);
      for (int i = 0; i < len; ++i)
        a[i] = rng::complex_normal(seed ^ 0x7254ULL, kVerifyStream,
                                   static_cast<std::uint64_t>(trial) * 256 + i);
      const Complex lambda = random_interior_point(seed, 4000000 + trial, 0.9);
      const CoefficientSequence seq = make_coefficients(a);
      const CoefficientSequence back = invert_transfer(transfer(seq, lambda));
      worst = std::max(worst, (back.values - seq.values).abs().maxCoeff());
    }
    push("transfer_roundtrip", worst, 1e-12);
  }

  // Proposition 5 pointwise summation identity.
  {
    const int n_sum = 50;
    const CoefficientSequence a = family_ones(n_sum);
    const TransferredSequence b = transfer(a, sp.lambda);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const UnitComplex w = rng::unit_point(seed, kVerifyStream, 5000000 + trial);
      const std::vector<UnitComplex> orbit = orbit_row(f, w, n_sum + 1);
      Complex lhs = 0.0, rhs = 0.0;
      for (int n = 1; n <= n_sum; ++n) {
        lhs += a.values[n - 1] * orbit[n - 1].value();
        rhs += b.values[n - 1] *
               (orbit[n - 1].value() - sp.lambda * orbit[n].value());
      }
      rhs += sp.lambda * b.last() * orbit[n_sum].value();
      worst = std::max(worst, std::abs(lhs - rhs) / a.abs_sum);
    }
    push("prop5_pointwise", worst, 1e-8);
  }

  // Generating-function identity A_N = (1 - lambda z) B_N + lambda b_N z^{N+1}.
  {
    CArray a(100);
    for (int i = 0; i < 100; ++i)
      a[i] = rng::complex_normal(seed ^ 0xa5a5ULL, kVerifyStream, i);
    CArray samples(256);
    for (int i = 0; i < 256; ++i) samples[i] = std::polar(1.0, kTwoPi * i / 256.0);
    const CoefficientSequence seq = make_coefficients(std::move(a));
    const double residual = generating_identity_check(seq, Complex(0.9), samples);
    push("generating_identity", residual / seq.abs_sum, 1e-10);
  }

  // sigma_N against quadrature of || sum a_n f∘n ||_2.
  {
    const QuadratureGrid grid(16);
    const int n_sum = 6;
    CArray a(n_sum);
    for (int i = 0; i < n_sum; ++i)
      a[i] = rng::complex_normal(seed ^ 0x5157ULL, kVerifyStream, i);
    const CoefficientSequence seq = make_coefficients(std::move(a));
    const TransferredSequence b = transfer(seq, sp.lambda);
    CArray sum = CArray::Zero(grid.size());
    CArray it = grid.nodes();
    for (int n = 1; n <= n_sum; ++n) {
      for (int j = 0; j < grid.size(); ++j) {
        const Complex w = blaschke_eval(f, it[j]);
        it[j] = w / std::abs(w);
      }
      sum += seq.values[n - 1] * it;
    }
    const double quad = grid_l2(sum, grid);
    push("sigma_vs_quadrature", std::abs(quad - b.sigma) / b.sigma, 1e-6);
  }

  // Two-sided transfer norm bounds: count violations over random draws.
  {
    long violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const int len =
          1 + static_cast<int>(rng::uniform01(seed, kVerifyStream, 6000000 + trial) * 60);
      CArray a(len);
      for (int i = 0; i < len; ++i)
        a[i] = rng::complex_normal(seed ^ 0xbadcULL, kVerifyStream, trial * 64 + i);
      const Complex lambda = random_interior_point(seed, 7000000 + trial, 0.95);
      if (!norm_bounds_check(make_coefficients(std::move(a)), lambda).all_ok())
        ++violations;
    }
    push("norm_bounds_violations", static_cast<double>(violations), 0.5);
  }

  return rows;
}

bool all_pass(const std::vector<VerificationRow>& rows) {
  for (const VerificationRow& row : rows)
    if (!row.pass) return false;
  return true;
}

}  // namespace innerclt
