#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cauchy_est/estimators.hpp"
#include "cauchy_est/geometry.hpp"

namespace cauchy_est {

enum class EstimatorKind {
  Qam,            // Y_n
  OneStep,        // Z_n
  OneStepMedian,  // Z~_n, median-adjusted initializer
  Mle,            // theta_hat_n, seeded at the f3 one-step estimate
};

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view text);

/// Computes an estimate from one replication's batch; nullopt marks a failed
/// replication (degenerate initializer, non-converged solver, ...).
using EstimatorFn = std::function<std::optional<Complex>(std::span<const double>)>;

/// Built-in estimator for (kind, generator). Domain and degeneracy errors are
/// turned into nullopt.
EstimatorFn make_estimator(EstimatorKind kind, const Generator& g);

struct RunOptions {
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct MseScenario {
  HalfPlanePoint theta{0.0, 1.0};
  std::size_t n = 10;
  EstimatorKind estimator = EstimatorKind::OneStep;
  Generator generator = Generator::f3();
  std::size_t replications = 100000;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct SimTableRow {
  MseScenario scenario;
  /// Mean over successful replications of n |T - theta|^2 / Im(theta)^2.
  double statistic = 0.0;
  double mc_stderr = 0.0;
  std::size_t failures = 0;
  /// First failure message, if any replication failed.
  std::string failure_mode;

  std::size_t successes() const { return scenario.replications - failures; }
};

/// Normalized MSE for a scenario. Replication r draws from SeedSpec(base_seed,
/// r), so the result is bit-identical for any worker count. Throws
/// std::runtime_error when every replication fails.
SimTableRow run_mse(const MseScenario& scenario, const RunOptions& options = {});
SimTableRow run_mse(const MseScenario& scenario, const EstimatorFn& estimator,
                    const RunOptions& options = {});

struct TailScenario {
  HalfPlanePoint theta{0.0, 1.0};
  std::size_t n = 10;
  double eps = 1.0;
  EstimatorKind estimator = EstimatorKind::OneStep;
  Generator generator = Generator::f3();
  std::size_t replications = 100000;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct TailResult {
  TailScenario scenario;
  /// Fraction of successful replications with |T - theta| > eps.
  double p_hat = 0.0;
  /// -log(p_hat) / (n b(eps, theta)); +infinity when p_hat == 0.
  double rate_ratio = 0.0;
  double mc_stderr_p = 0.0;
  std::size_t hits = 0;
  std::size_t failures = 0;
  std::vector<std::string> warnings;
};

TailResult run_tail(const TailScenario& scenario, const RunOptions& options = {});
TailResult run_tail(const TailScenario& scenario, const EstimatorFn& estimator,
                    const RunOptions& options = {});

/// Normalized circular MSE n |W_n - w|^2 / (1 - |w|^2)^2.
struct CircularMseScenario {
  DiskPoint w{0.0, 0.0};
  HalfPlanePoint alpha{0.0, 1.0};
  std::size_t n = 10;
  Generator generator = Generator::f1();
  bool median_adjust = false;
  std::size_t replications = 100000;
  std::uint64_t base_seed = 0;

  void validate() const;
};

struct CircularSimRow {
  CircularMseScenario scenario;
  double statistic = 0.0;
  double mc_stderr = 0.0;
  std::size_t failures = 0;
  std::string failure_mode;
};

CircularSimRow run_circular_mse(const CircularMseScenario& scenario, const RunOptions& options = {});

/// Runs every cell in order. A cell that throws comes back as a row with
/// failures == replications and the error in failure_mode. Throws
/// std::invalid_argument for an empty list.
std::vector<SimTableRow> run_table(std::span<const MseScenario> scenarios,
                                   const RunOptions& options = {});

/// Table layouts of the reference study: (theta, n in {10,50,100,500,1000})
/// crossed with f1..f4 for one-step estimators, and the MLE column.
std::vector<MseScenario> one_step_table(const HalfPlanePoint& theta, bool median_adjust,
                                        std::size_t replications, std::uint64_t base_seed);
std::vector<MseScenario> mle_table(std::size_t replications, std::uint64_t base_seed);

// Serialization ------------------------------------------------------------

/// Header: mu,sigma,n,estimator,generator,replications,failures,statistic,mc_stderr
std::string to_csv(std::span<const SimTableRow> rows);
std::string to_csv(std::span<const TailResult> rows);
std::string to_csv(std::span<const CircularSimRow> rows);

nlohmann::json to_json(const SimTableRow& row);
nlohmann::json to_json(const TailResult& row);
nlohmann::json to_json(const CircularSimRow& row);

/// Scenario files: a JSON object or array of objects with the scenario's
/// fields ("theta" as [re, im] or "a+bi"; "generator" as in Generator::parse).
std::vector<MseScenario> mse_scenarios_from_json(const nlohmann::json& doc);
std::vector<TailScenario> tail_scenarios_from_json(const nlohmann::json& doc);

/// Deterministic pairwise sum; the split points depend only on the length.
double pairwise_sum(std::span<const double> values);

}  // namespace cauchy_est
