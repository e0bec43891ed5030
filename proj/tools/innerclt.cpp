#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "innerclt/io.hpp"
#include "innerclt/verification.hpp"

namespace {

using namespace innerclt;

ExperimentConfig config_or_default(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return load_config(path);
}

int cmd_verify(const std::string& config_path) {
  const ExperimentConfig config = config_or_default(config_path);
  const std::vector<VerificationRow> rows = run_verification(config);
  std::printf("%-28s %14s %12s  %s\n", "check", "residual", "tolerance", "status");
  for (const VerificationRow& row : rows)
    std::printf("%-28s %14.3e %12.1e  %s\n", row.name.c_str(), row.residual,
                row.tolerance, row.pass ? "pass" : "FAIL");
  return all_pass(rows) ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<int> tail_start, std::optional<int> tail_truncation) {
  const ExperimentConfig config = config_or_default(config_path);
  std::filesystem::create_directories(out_dir);

  // The tail experiment is cheap and can reject its truncation; run it first
  // so a bad tail request does not discard a finished simulation.
  std::optional<TailCltResult> tail;
  if (tail_start) {
    const int truncation = tail_truncation.value_or(*tail_start * 6);
    tail = tail_clt_experiment(config, *tail_start, truncation);
    std::printf("tail ks_sup = %.6f (sigma_tail = %.6g, discarded ratio = %.2e)\n",
                tail->ks_sup, tail->sigma_tail, tail->discarded_ratio);
  }

  const ExperimentReport report = run_simulation(config);
  for (const std::string& warning : report.warnings)
    std::cerr << "warning: " << warning << '\n';

  const auto dir = std::filesystem::path(out_dir);
  write_results_csv(report, (dir / "results.csv").string());
  write_metadata_json(report, config, (dir / "metadata.json").string(),
                      tail ? &*tail : nullptr);
  write_ks_plot_svg(report, (dir / "ks_vs_N.svg").string());

  if (report.fit)
    std::printf("fitted exponent = %.4f +/- %.4f over %d points\n",
                report.fit->exponent, report.fit->stderr_, report.fit->points_used);
  std::printf("wrote %s\n", (dir / "results.csv").string().c_str());
  return 0;
}

int cmd_rate(const std::string& in_csv, long samples) {
  const ExperimentReport report = read_results_csv(in_csv);
  std::vector<std::pair<double, double>> points;
  for (const ReportRow& row : report.rows)
    points.emplace_back(static_cast<double>(row.n), row.ks_sup);
  const double floor = samples > 0 ? 1.5 / std::sqrt(static_cast<double>(samples)) : 0.0;
  const RateFit fit = rate_fit(points, floor);
  std::printf("exponent = %.6f +/- %.6f (points used: %d)\n", fit.exponent, fit.stderr_,
              fit.points_used);
  return 0;
}

int cmd_bound(const std::string& config_path) {
  const ExperimentConfig config = config_or_default(config_path);
  config.validate();
  const SchwarzPickData sp = schwarz_pick_data(config.f);
  std::printf("%8s %14s %14s %10s\n", "N", "rhs_bound", "ks_sup", "ratio");
  for (const int n : config.n_grid) {
    const CoefficientSequence a = config.family.make(n);
    const double rhs =
        berry_esseen_rhs(a, BoundParams{config.delta, config.c_user, sp.lambda}, n);
    const ComplexSamples z = sample_zn(config, n);
    const double ks = cramer_wold_discrepancy(z, config.alpha_count).sup_discrepancy;
    std::printf("%8d %14.6g %14.6g %10.4f\n", n, rhs, ks, ks / rhs);
  }
  return 0;
}

int cmd_transfer(const std::string& coeffs_csv, const std::string& lambda_str) {
  Complex lambda;
  {
    double re = 0.0, im = 0.0;
    const int matched = std::sscanf(lambda_str.c_str(), "%lf,%lf", &re, &im);
    if (matched < 1)
      throw ConfigError("--lambda expects re or re,im, got '" + lambda_str + "'");
    lambda = Complex(re, im);
  }
  const CoefficientSequence a = read_coefficients_csv(coeffs_csv);
  const TransferredSequence b = transfer(a, lambda);
  const LindebergRatios ratios = lindeberg_ratios(a);

  std::printf("n,re_b,im_b\n");
  for (int n = 1; n <= b.length(); ++n)
    std::printf("%d,%s,%s\n", n, format_full(b.values[n - 1].real()).c_str(),
                format_full(b.values[n - 1].imag()).c_str());
  std::printf("rho_N = %s\n", format_full(b.rho).c_str());
  std::printf("sigma_N = %s\n", format_full(b.sigma).c_str());
  std::printf("sigma_N^2 = %s\n", format_full(b.sigma_sq).c_str());
  std::printf("lindeberg_last = %s\n", format_full(ratios.last_ratio).c_str());
  std::printf("lindeberg_max = %s\n", format_full(ratios.max_ratio).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary iteration of finite Blaschke products: identity checks, "
               "Monte Carlo CLT experiments and Berry-Esseen bound evaluation"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", in_csv, coeffs_csv, lambda_str;
  long samples = 0;
  int tail_start_value = 0, tail_truncation_value = 0;

  CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
  verify->add_option("--config", config_path, "TOML or JSON config file");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the Monte Carlo experiments");
  simulate->add_option("--config", config_path, "TOML or JSON config file");
  simulate->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* tail_start_opt = simulate->add_option(
      "--tail-start", tail_start_value, "also run the tail CLT from this index");
  simulate->add_option("--tail-truncation", tail_truncation_value,
                       "tail series truncation (default 6 * tail-start)");

  CLI::App* rate = app.add_subcommand("rate", "fit the log-log decay exponent");
  rate->add_option("--in", in_csv, "results.csv written by simulate")->required();
  rate->add_option("--samples", samples,
                   "sample count used to derive the noise floor (0 = no floor)");

  CLI::App* bound =
      app.add_subcommand("bound", "error-bound right-hand side against measured ks_sup");
  bound->add_option("--config", config_path, "TOML or JSON config file");

  CLI::App* transfer_cmd =
      app.add_subcommand("transfer", "print the transferred sequence b, rho, sigma");
  transfer_cmd->add_option("--coeffs", coeffs_csv, "coefficient CSV (n,re_a,im_a)")
      ->required();
  transfer_cmd->add_option("--lambda", lambda_str, "lambda as re or re,im")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(config_path);
    if (app.got_subcommand(simulate)) {
      std::optional<int> tail_start, tail_truncation;
      if (tail_start_opt->count() > 0) {
        tail_start = tail_start_value;
        if (tail_truncation_value > 0) tail_truncation = tail_truncation_value;
      }
      return cmd_simulate(config_path, out_dir, tail_start, tail_truncation);
    }
    if (app.got_subcommand(rate)) return cmd_rate(in_csv, samples);
    if (app.got_subcommand(bound)) return cmd_bound(config_path);
    if (app.got_subcommand(transfer_cmd)) return cmd_transfer(coeffs_csv, lambda_str);
  } catch (const innerclt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const innerclt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
