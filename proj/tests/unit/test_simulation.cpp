#include <algorithm>
#include <cmath>
#include <cstring>

#include "cauchy_est/simulation.hpp"
#include "doctest.h"

using namespace cauchy_est;
using doctest::Approx;

namespace {

const HalfPlanePoint kI(0.0, 1.0);

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = 1.0 / double(k + 1);
  double naive = 0.0;
  for (double x : v) naive += x;
  CHECK(pairwise_sum(v) == Approx(naive).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("estimator names round trip") {
  for (EstimatorKind k : {EstimatorKind::Qam, EstimatorKind::OneStep, EstimatorKind::OneStepMedian,
                          EstimatorKind::Mle}) {
    CHECK(parse_estimator_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_estimator_kind("median"), std::invalid_argument);
}

TEST_CASE("run_mse with a constant estimator is exactly zero") {
  const MseScenario s{kI, 20, EstimatorKind::OneStep, Generator::f3(), 200, 1};
  const SimTableRow row = run_mse(s, [](std::span<const double>) -> std::optional<Complex> {
    return Complex{0.0, 1.0};
  });
  CHECK(row.statistic == 0.0);
  CHECK(row.mc_stderr == 0.0);
  CHECK(row.failures == 0);
}

TEST_CASE("run_mse accounts for failures") {
  const MseScenario s{kI, 20, EstimatorKind::OneStep, Generator::f3(), 300, 1};
  int calls = 0;
  const EstimatorFn flaky = [&calls](std::span<const double>) -> std::optional<Complex> {
    if (calls++ % 3 == 0) return std::nullopt;
    return Complex{0.0, 1.0};
  };
  const SimTableRow row = run_mse(s, flaky, RunOptions{1});
  CHECK(row.failures == 100);
  CHECK(row.successes() + row.failures == s.replications);
  CHECK_FALSE(row.failure_mode.empty());

  const EstimatorFn broken = [](std::span<const double>) -> std::optional<Complex> {
    throw std::runtime_error("boom");
  };
  CHECK_THROWS_WITH_AS(run_mse(s, broken), doctest::Contains("boom"), std::runtime_error);
}

TEST_CASE("run_mse validates its scenario") {
  CHECK_THROWS_AS(run_mse(MseScenario{kI, 1, EstimatorKind::OneStep, Generator::f3(), 1000, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_mse(MseScenario{kI, 10, EstimatorKind::OneStep, Generator::f3(), 99, 0}),
                  std::invalid_argument);
}

TEST_CASE("run_mse is bit-identical for any worker count") {
  for (EstimatorKind kind : {EstimatorKind::OneStep, EstimatorKind::OneStepMedian, EstimatorKind::Mle}) {
    const MseScenario s{HalfPlanePoint(10.0, 1.0), 12, kind, Generator::f1(), 2000, 99};
    const SimTableRow a = run_mse(s, RunOptions{1});
    const SimTableRow b = run_mse(s, RunOptions{3});
    const SimTableRow c = run_mse(s, RunOptions{8});
    CHECK(same_bits(a.statistic, b.statistic));
    CHECK(same_bits(a.statistic, c.statistic));
    CHECK(same_bits(a.mc_stderr, c.mc_stderr));
    CHECK(a.failures == c.failures);
  }
}

TEST_CASE("one-step f3 at n = 10 reproduces the reference table value") {
  // Reference study: 4.614 for theta = i, n = 10, f3.
  const SimTableRow row = run_mse({kI, 10, EstimatorKind::OneStep, Generator::f3(), 100000, 7});
  INFO("statistic=", row.statistic, " se=", row.mc_stderr);
  CHECK(row.failures == 0);
  CHECK(std::fabs(row.statistic - 4.614) < 4.0 * row.mc_stderr);
}

TEST_CASE("run_table layouts and failed cells") {
  CHECK(one_step_table(kI, false, 1000, 0).size() == 20);
  CHECK(mle_table(1000, 0).size() == 5);
  CHECK_THROWS_AS(run_table(std::vector<MseScenario>{}), std::invalid_argument);

  const std::vector<MseScenario> cells{
      {kI, 10, EstimatorKind::OneStep, Generator::f3(), 200, 3},
      {kI, 1, EstimatorKind::OneStep, Generator::f3(), 200, 3},  // invalid: reported, not thrown
      {kI, 10, EstimatorKind::Mle, Generator::f3(), 200, 3},
  };
  const std::vector<SimTableRow> rows = run_table(cells);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].failures == 0);
  CHECK(rows[1].failures == 200);
  CHECK(std::isnan(rows[1].statistic));
  CHECK(rows[2].scenario.estimator == EstimatorKind::Mle);

  const std::string csv = to_csv(rows);
  CHECK(csv.starts_with("mu,sigma,n,estimator,generator,replications,failures,statistic,mc_stderr\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const nlohmann::json j = to_json(rows[0]);
  CHECK(j.at("generator") == "f3");
  CHECK(j.at("estimator") == "one_step");
  CHECK(j.at("replications") == 200);
}

TEST_CASE("run_tail") {
  SUBCASE("constant estimator never exceeds eps") {
    const TailScenario s{kI, 10, 1.0, EstimatorKind::OneStep, Generator::f3(), 500, 0};
    const TailResult r = run_tail(s, [](std::span<const double>) -> std::optional<Complex> {
      return Complex{0.0, 1.0};
    });
    CHECK(r.p_hat == 0.0);
    CHECK(std::isinf(r.rate_ratio));
    CHECK_FALSE(r.warnings.empty());
    CHECK(to_json(r).at("rate_ratio").is_null());
  }

  SUBCASE("MLE at n = 40 sits on the Bahadur scale") {
    const TailResult r = run_tail({kI, 40, 1.0, EstimatorKind::Mle, Generator::f3(), 100000, 17});
    INFO("p_hat=", r.p_hat, " rate_ratio=", r.rate_ratio);
    CHECK(r.p_hat > 0.0);
    CHECK(r.p_hat < 0.1);
    CHECK(r.rate_ratio >= 0.5);
    CHECK(r.rate_ratio <= 2.0);
    CHECK(r.mc_stderr_p == Approx(std::sqrt(r.p_hat * (1 - r.p_hat) / 100000.0)));
  }

  CHECK_THROWS_AS(run_tail({kI, 10, 0.0, EstimatorKind::OneStep, Generator::f3(), 500, 0}),
                  std::invalid_argument);
}

TEST_CASE("scenario files") {
  const auto doc = nlohmann::json::parse(R"([
    {"theta": "10+1i", "n": 50, "estimator": "one_step_median", "generator": "f2",
     "replications": 1000, "base_seed": 5},
    {"mu": 0, "sigma": 10, "n": 100, "estimator": "mle", "seed": 3}
  ])");
  const std::vector<MseScenario> s = mse_scenarios_from_json(doc);
  REQUIRE(s.size() == 2);
  CHECK(s[0].theta == HalfPlanePoint(10.0, 1.0));
  CHECK(s[0].estimator == EstimatorKind::OneStepMedian);
  CHECK(s[0].generator == Generator::f2());
  CHECK(s[0].base_seed == 5);
  CHECK(s[1].theta == HalfPlanePoint(0.0, 10.0));
  CHECK(s[1].replications == 100000);
  CHECK(s[1].base_seed == 3);

  const auto tail = tail_scenarios_from_json(
      nlohmann::json::parse(R"({"theta": [0, 1], "n": 20, "eps": 0.5, "replications": 200})"));
  REQUIRE(tail.size() == 1);
  CHECK(tail[0].eps == 0.5);

  CHECK_THROWS(mse_scenarios_from_json(nlohmann::json::parse(R"({"theta": "0+1i"})")));
  CHECK_THROWS_AS(mse_scenarios_from_json(nlohmann::json::parse(R"({"n": 5, "replications": 10})")),
                  std::invalid_argument);
}

TEST_CASE("circular MSE rows") {
  const CircularMseScenario s{DiskPoint(0.5, 0.0), HalfPlanePoint(0.0, 1.0), 50, Generator::f1(),
                              false, 2000, 4};
  const CircularSimRow a = run_circular_mse(s, RunOptions{1});
  const CircularSimRow b = run_circular_mse(s, RunOptions{4});
  CHECK(same_bits(a.statistic, b.statistic));
  CHECK(a.statistic > 0.5);
  CHECK(a.statistic < 2.0);
  const std::vector<CircularSimRow> rows{a};
  CHECK(to_csv(rows).starts_with("w_re,w_im,alpha_re,alpha_im,n,"));
}
