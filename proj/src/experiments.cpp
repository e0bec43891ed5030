#include "innerclt/experiments.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "innerclt/parallel.hpp"
#include "innerclt/rng.hpp"

namespace innerclt {

namespace {

// Stream tags keep the per-purpose draws independent.
enum class Stream : std::uint64_t { zn = 1, diagnostics = 2, weak_law = 3, tail = 4 };

std::uint64_t stream_id(Stream tag, long n) {
  return (static_cast<std::uint64_t>(tag) << 32) ^ static_cast<std::uint64_t>(n);
}

// Walk one boundary orbit f∘1(w)..f∘n_max(w), invoking visit(n, value).
template <typename Visitor>
void walk_orbit(const BlaschkeProduct& f, Complex w, int n_max, Visitor&& visit) {
  Complex z = w;
  for (int n = 1; n <= n_max; ++n) {
    z = blaschke_eval(f, z);
    z /= std::abs(z);
    visit(n, z);
  }
}

double sample_mean(const RArray& v) {
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc.add(v[i]);
  return acc.value() / static_cast<double>(v.size());
}

double sample_se(const RArray& v, double mean) {
  if (v.size() < 2) return 0.0;
  CompensatedSum<double> acc;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double d = v[i] - mean;
    acc.add(d * d);
  }
  return std::sqrt(acc.value() / (static_cast<double>(v.size()) - 1.0) /
                   static_cast<double>(v.size()));
}

}  // namespace

CoefficientSequence CoefficientFamily::make(int n) const {
  switch (kind) {
    case Kind::ones:
      return family_ones(n);
    case Kind::sqrt_ramp:
      return family_sqrt(n);
    case Kind::geometric:
      return family_geometric(ratio, n);
    case Kind::random:
      return family_random(seed, n);
  }
  throw std::logic_error("CoefficientFamily::make: unknown kind");
}

bool CoefficientFamily::square_summable() const {
  return kind == Kind::geometric && std::abs(ratio) < 1.0;
}

double CoefficientFamily::l2_tail_mass(int beyond) const {
  if (!square_summable())
    throw TruncationTooCoarse("family '" + name() + "' has no summable l2 tail");
  const double r2 = ratio * ratio;
  // sum_{n > beyond} r^{2n}
  return std::pow(r2, beyond + 1) / (1.0 - r2);
}

std::string CoefficientFamily::name() const {
  switch (kind) {
    case Kind::ones:
      return "ones";
    case Kind::sqrt_ramp:
      return "sqrt";
    case Kind::geometric:
      return "geometric";
    case Kind::random:
      return "random";
  }
  return "unknown";
}

CoefficientFamily CoefficientFamily::parse(const std::string& name, double ratio,
                                           std::uint64_t seed) {
  CoefficientFamily family;
  family.ratio = ratio;
  family.seed = seed;
  if (name == "ones")
    family.kind = Kind::ones;
  else if (name == "sqrt")
    family.kind = Kind::sqrt_ramp;
  else if (name == "geometric")
    family.kind = Kind::geometric;
  else if (name == "random")
    family.kind = Kind::random;
  else
    throw ConfigError("unknown coefficient family '" + name + "'");
  return family;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ConfigError("n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw ConfigError("n_grid must be strictly increasing");
  }
  if (samples < 1000)
    throw ConfigError("samples must be >= 1000 for distributional tests");
  if (alpha_count < 4) throw ConfigError("alpha_count must be >= 4");
  if (delta < 1.0) throw ConfigError("delta must be >= 1");
  if (!(c_user > 0.0)) throw ConfigError("c_user must be positive");
}

UnitComplex zn_draw_point(const ExperimentConfig& config, int n, long index) {
  return rng::unit_point(config.seed, stream_id(Stream::zn, n),
                         static_cast<std::uint64_t>(index));
}

ComplexSamples sample_zn(const ExperimentConfig& config, int n) {
  const CoefficientSequence a = config.family.make(n);
  const SchwarzPickData sp = schwarz_pick_data(config.f);
  const TransferredSequence b = transfer(a, sp.lambda);
  if (!(b.sigma > 0.0)) throw DegenerateSigma("sample_zn: sigma_N vanishes");

  ComplexSamples out;
  out.seed = config.seed;
  out.values.resize(config.samples);
  const double inv_sigma = 1.0 / b.sigma;
  parallel_for(config.samples, [&](long i) {
    const Complex w = zn_draw_point(config, n, i).value();
    Complex acc = 0.0;
    walk_orbit(config.f, w, n, [&](int k, Complex z) { acc += a.values[k - 1] * z; });
    out.values[i] = acc * inv_sigma;
  });
  return out;
}

ExperimentReport clt_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SchwarzPickData sp = schwarz_pick_data(config.f);

  ExperimentReport report;
  report.samples = config.samples;
  report.seed = config.seed;

  const CoefficientSequence probe = config.family.make(config.n_grid.back());
  const LindebergRatios ratios = lindeberg_ratios(probe);
  if (ratios.max_ratio > 0.1)
    report.warnings.push_back(
        "coefficient family fails the Lindeberg ratio check at N = " +
        std::to_string(config.n_grid.back()) +
        " (max ratio " + std::to_string(ratios.max_ratio) + "); the limit law need not be normal");

  for (const int n : config.n_grid) {
    const CoefficientSequence a = config.family.make(n);
    const TransferredSequence b = transfer(a, sp.lambda);
    const ComplexSamples z = sample_zn(config, n);
    const CramerWoldResult cw = cramer_wold_discrepancy(z, config.alpha_count);

    ReportRow row;
    row.n = n;
    row.sigma_n = b.sigma;
    row.rho_n = b.rho;
    row.abs_b_n = std::abs(b.last());
    row.ks_sup = cw.sup_discrepancy;
    row.rhs_bound =
        berry_esseen_rhs(a, BoundParams{config.delta, config.c_user, sp.lambda}, n);
    report.rows.push_back(row);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& n_vs_ks,
                 double noise_floor) {
  std::vector<std::pair<double, double>> points;
  for (const auto& [n, ks] : n_vs_ks)
    if (ks > noise_floor && n > 0.0) points.emplace_back(std::log(n), std::log(ks));
  if (points.size() < 4)
    throw NoiseFloor("rate_fit: only " + std::to_string(points.size()) +
                     " grid points above the noise floor, need 4");

  const double m = static_cast<double>(points.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  RateFit fit;
  fit.points_used = static_cast<int>(points.size());
  fit.exponent = sxy / sxx;
  double rss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - mean_y - fit.exponent * (x - mean_x);
    rss += r * r;
  }
  fit.stderr_ = points.size() > 2 ? std::sqrt(rss / (m - 2.0) / sxx) : 0.0;
  return fit;
}

RateFit rate_fit(const ExperimentReport& report) {
  std::vector<std::pair<double, double>> points;
  points.reserve(report.rows.size());
  for (const ReportRow& row : report.rows)
    points.emplace_back(static_cast<double>(row.n), row.ks_sup);
  const double floor =
      report.samples > 0 ? 1.5 / std::sqrt(static_cast<double>(report.samples)) : 0.0;
  return rate_fit(points, floor);
}

BrownEaglesonDiagnostics brown_eagleson_diagnostics(const ExperimentConfig& config,
                                                    int n) {
  const SchwarzPickData sp = schwarz_pick_data(config.f);
  const CoefficientSequence a = config.family.make(n);
  const TransferredSequence b = transfer(a, sp.lambda);
  if (!(b.rho > 0.0)) throw DegenerateSigma("brown_eagleson_diagnostics: rho_N = 0");

  const Complex alpha = 1.0;  // first Cramer-Wold direction
  const double one_minus = 1.0 - std::norm(sp.lambda);
  const double rho_sq = b.rho_sq;
  const double epsilon = 0.1;
  const long s = config.samples;
  const std::uint64_t stream = stream_id(Stream::diagnostics, n);

  // Fixed-size blocks make the orbit-mean reduction independent of the
  // worker count: block partials are serial, the final pass is ordered.
  constexpr long kBlock = 4096;
  const long blocks = (s + kBlock - 1) / kBlock;
  std::vector<CArray> block_orbit_sum(static_cast<std::size_t>(blocks));
  CArray weighted_sq(s);   // sum_n b_n^2 f∘(n+1)(w) per draw
  RArray max_term(s);      // max_n |Re(alpha b_n Y_n)| per draw

  parallel_for(blocks, [&](long blk) {
    CArray orbit_sum = CArray::Zero(n);
    const long lo = blk * kBlock;
    const long hi = std::min(s, lo + kBlock);
    for (long i = lo; i < hi; ++i) {
      const Complex w =
          rng::unit_point(config.seed, stream, static_cast<std::uint64_t>(i)).value();
      Complex sq_acc = 0.0;
      double worst = 0.0;
      Complex prev = 0.0;  // f∘k(w) from the previous step
      walk_orbit(config.f, w, n + 1, [&](int k, Complex z) {
        if (k >= 2) {
          const Complex b_prev = b.values[k - 2];
          orbit_sum[k - 2] += z;
          sq_acc += b_prev * b_prev * z;
          const Complex y = prev - sp.lambda * z;
          worst = std::max(worst, std::abs((alpha * b_prev * y).real()));
        }
        prev = z;
      });
      weighted_sq[i] = sq_acc;
      max_term[i] = worst;
    }
    block_orbit_sum[static_cast<std::size_t>(blk)] = std::move(orbit_sum);
  });

  CArray orbit_mean = CArray::Zero(n);
  for (const CArray& partial : block_orbit_sum) orbit_mean += partial;
  orbit_mean /= static_cast<double>(s);

  BrownEaglesonDiagnostics diag;

  double m_max = 0.0;
  for (int k = 0; k < n; ++k) {
    const Complex bk = b.values[k];
    const double term = 0.5 * one_minus * std::norm(bk) +
                        0.5 * (alpha * alpha * sp.mu * bk * bk * orbit_mean[k]).real();
    m_max = std::max(m_max, term);
  }
  diag.m_n_est = m_max / rho_sq;

  RArray v_n2(s);
  for (long i = 0; i < s; ++i)
    v_n2[i] = 0.5 * one_minus +
              0.5 * (alpha * alpha * sp.mu * weighted_sq[i]).real() / rho_sq;
  diag.v_n2_est = sample_mean(v_n2);
  diag.v_n2_se = sample_se(v_n2, diag.v_n2_est);

  long exceed = 0;
  for (long i = 0; i < s; ++i)
    if (max_term[i] / b.rho > epsilon) ++exceed;
  diag.lindeberg_freq = static_cast<double>(exceed) / static_cast<double>(s);
  return diag;
}

std::vector<WeakLawRow> weak_law_experiment(const ExperimentConfig& config) {
  config.validate();
  const SchwarzPickData sp = schwarz_pick_data(config.f);
  const double l = std::abs(sp.lambda);

  std::vector<WeakLawRow> rows;
  rows.reserve(config.n_grid.size());
  for (const int n : config.n_grid) {
    const CoefficientSequence a = config.family.make(n);
    if (!(a.abs_sum > 0.0)) throw AllZero("weak_law_experiment: S_N = 0");
    const double s_sq = a.abs_sum * a.abs_sum;
    const std::uint64_t stream = stream_id(Stream::weak_law, n);

    RArray values(config.samples);
    parallel_for(config.samples, [&](long i) {
      const Complex w =
          rng::unit_point(config.seed, stream, static_cast<std::uint64_t>(i)).value();
      Complex acc = 0.0;
      walk_orbit(config.f, w, n, [&](int k, Complex z) { acc += a.values[k - 1] * z; });
      values[i] = std::norm(acc) / s_sq;
    });

    WeakLawRow row;
    row.n = n;
    row.second_moment = sample_mean(values);
    row.se = sample_se(values, row.second_moment);
    row.envelope = (1.0 + l) / (1.0 - l) * a.sum_sq / s_sq;
    rows.push_back(row);
  }
  return rows;
}

TailCltResult tail_clt_experiment(const ExperimentConfig& config, int tail_start,
                                  int truncation) {
  config.validate();
  if (tail_start < 1 || truncation <= tail_start)
    throw std::invalid_argument("tail_clt_experiment: need 1 <= tail_start < truncation");
  const SchwarzPickData sp = schwarz_pick_data(config.f);
  const double l = std::abs(sp.lambda);

  const CoefficientSequence full = config.family.make(truncation);
  const int len = truncation - tail_start + 1;
  const CoefficientSequence shifted =
      make_coefficients(full.values.segment(tail_start - 1, len));
  const TransferredSequence bt = transfer(shifted, sp.lambda);
  if (!(bt.sigma > 0.0)) throw DegenerateSigma("tail_clt_experiment: sigma(N) = 0");

  // Discarded mass, bounded through the norm equivalence; must be tiny
  // against sigma(N)^2.
  const double discarded =
      config.family.l2_tail_mass(truncation) * (1.0 + l) / (1.0 - l);
  TailCltResult result;
  result.sigma_tail = bt.sigma;
  result.discarded_ratio = discarded / (bt.sigma * bt.sigma);
  if (result.discarded_ratio > 1e-4)
    throw TruncationTooCoarse("tail_clt_experiment: discarded tail mass ratio " +
                              std::to_string(result.discarded_ratio) + " exceeds 1e-4");

  ComplexSamples z;
  z.seed = config.seed;
  z.values.resize(config.samples);
  const std::uint64_t stream = stream_id(Stream::tail, tail_start);
  const double inv_sigma = 1.0 / bt.sigma;
  parallel_for(config.samples, [&](long i) {
    const Complex w =
        rng::unit_point(config.seed, stream, static_cast<std::uint64_t>(i)).value();
    Complex acc = 0.0;
    walk_orbit(config.f, w, truncation, [&](int k, Complex zk) {
      if (k >= tail_start) acc += full.values[k - 1] * zk;
    });
    z.values[i] = acc * inv_sigma;
  });

  result.ks_sup = cramer_wold_discrepancy(z, config.alpha_count).sup_discrepancy;
  return result;
}

ExperimentReport run_simulation(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report = clt_experiment(config);
  const std::vector<WeakLawRow> weak = weak_law_experiment(config);

  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const BrownEaglesonDiagnostics diag =
        brown_eagleson_diagnostics(config, static_cast<int>(report.rows[i].n));
    report.rows[i].m_n_est = diag.m_n_est;
    report.rows[i].v_n2_est = diag.v_n2_est;
    report.rows[i].weak_law_moment = weak[i].second_moment;
  }

  try {
    report.fit = rate_fit(report);
  } catch (const NoiseFloor& e) {
    report.warnings.push_back(std::string("rate fit skipped: ") + e.what());
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace innerclt
