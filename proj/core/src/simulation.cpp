#include "cauchy_est/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "cauchy_est/complex_literal.hpp"
#include "cauchy_est/errors.hpp"
#include "cauchy_est/mle.hpp"
#include "cauchy_est/sampling.hpp"

namespace cauchy_est {

namespace {

struct Replicate {
  double value = 0.0;
  bool ok = false;
};

struct ReplicationRun {
  std::vector<Replicate> outcomes;
  std::size_t failures = 0;
  std::string first_failure;
};

unsigned resolve_workers(unsigned requested, std::size_t replications) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(replications, 1)));
}

// Runs body(r, scratch) for r in [0, replications) on contiguous chunks, one
// per worker. Every outcome is stored by index, so the result does not depend
// on the worker count.
template <class Body>
ReplicationRun run_replications(std::size_t replications, std::size_t n, unsigned workers,
                                const Body& body) {
  ReplicationRun run;
  run.outcomes.resize(replications);
  std::vector<std::string> messages(replications);

  const auto chunk = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> scratch(n);
    for (std::size_t r = lo; r < hi; ++r) {
      try {
        const std::optional<double> v = body(r, scratch);
        if (v && std::isfinite(*v)) {
          run.outcomes[r] = {*v, true};
        } else {
          messages[r] = v ? "non-finite estimate" : "estimator returned no value";
        }
      } catch (const std::exception& e) {
        messages[r] = e.what();
      }
    }
  };

  const unsigned w = resolve_workers(workers, replications);
  if (w <= 1) {
    chunk(0, replications);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (unsigned k = 0; k < w; ++k) {
      const std::size_t lo = replications * k / w;
      const std::size_t hi = replications * (k + 1) / w;
      threads.emplace_back(chunk, lo, hi);
    }
  }

  for (std::size_t r = 0; r < replications; ++r) {
    if (run.outcomes[r].ok) continue;
    if (run.failures++ == 0) run.first_failure = messages[r];
  }
  return run;
}

struct Moments {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t count = 0;
};

Moments moments_of(const ReplicationRun& run) {
  std::vector<double> values;
  values.reserve(run.outcomes.size());
  for (const Replicate& rep : run.outcomes) {
    if (rep.ok) values.push_back(rep.value);
  }
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  m.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (values.size() > 1) {
    for (double& v : values) v = (v - m.mean) * (v - m.mean);
    const double var = pairwise_sum(values) / static_cast<double>(values.size() - 1);
    m.stderr_of_mean = std::sqrt(var / static_cast<double>(m.count));
  }
  return m;
}

void require(bool cond, const char* message) {
  if (!cond) throw std::invalid_argument(message);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

HalfPlanePoint theta_from_json(const nlohmann::json& obj) {
  if (obj.contains("theta")) {
    const auto& t = obj.at("theta");
    if (t.is_string()) return HalfPlanePoint(parse_complex(t.get<std::string>()));
    return {t.at(0).get<double>(), t.at(1).get<double>()};
  }
  return {obj.value("mu", 0.0), obj.value("sigma", 1.0)};
}

std::uint64_t seed_from_json(const nlohmann::json& obj) {
  if (obj.contains("base_seed")) return obj.at("base_seed").get<std::uint64_t>();
  return obj.value("seed", std::uint64_t{0});
}

template <class Scenario, class Fill>
std::vector<Scenario> scenarios_from_json(const nlohmann::json& doc, const Fill& fill) {
  std::vector<Scenario> out;
  const auto one = [&](const nlohmann::json& obj) {
    if (!obj.is_object()) throw std::invalid_argument("scenario entries must be JSON objects");
    Scenario s;
    s.theta = theta_from_json(obj);
    s.n = obj.at("n").get<std::size_t>();
    s.estimator = parse_estimator_kind(obj.value("estimator", std::string("one_step")));
    s.generator = Generator::parse(obj.value("generator", std::string("f3")));
    s.replications = obj.value("replications", std::size_t{100000});
    s.base_seed = seed_from_json(obj);
    fill(obj, s);
    s.validate();
    out.push_back(s);
  };
  if (doc.is_array()) {
    for (const auto& obj : doc) one(obj);
  } else {
    one(doc);
  }
  if (out.empty()) throw std::invalid_argument("scenario file lists no scenarios");
  return out;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Qam: return "qam";
    case EstimatorKind::OneStep: return "one_step";
    case EstimatorKind::OneStepMedian: return "one_step_median";
    case EstimatorKind::Mle: return "mle";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view text) {
  if (text == "qam") return EstimatorKind::Qam;
  if (text == "one_step") return EstimatorKind::OneStep;
  if (text == "one_step_median") return EstimatorKind::OneStepMedian;
  if (text == "mle") return EstimatorKind::Mle;
  throw std::invalid_argument("unknown estimator '" + std::string(text) +
                              "' (expected qam, one_step, one_step_median or mle)");
}

EstimatorFn make_estimator(EstimatorKind kind, const Generator& g) {
  switch (kind) {
    case EstimatorKind::Qam:
      return [g](std::span<const double> xs) -> std::optional<Complex> {
        const EstimateOutcome y = qam_estimate(g, xs);
        if (y.degenerate()) {
          throw DegenerateError("degenerate initializer: generator " + g.label());
        }
        return y.value->value();
      };
    case EstimatorKind::OneStep:
      return [g](std::span<const double> xs) -> std::optional<Complex> {
        return estimate_pipeline(g, xs, false).estimate.value();
      };
    case EstimatorKind::OneStepMedian:
      return [g](std::span<const double> xs) -> std::optional<Complex> {
        return estimate_pipeline(g, xs, true).estimate.value();
      };
    case EstimatorKind::Mle:
      return [](std::span<const double> xs) -> std::optional<Complex> {
        const MleResult fit = mle(xs);
        if (!fit.converged) throw DegenerateError("mle did not converge");
        return fit.theta_hat.value();
      };
  }
  throw std::invalid_argument("unknown estimator kind");
}

void MseScenario::validate() const {
  require(n >= 2, "scenario needs n >= 2");
  require(replications >= 100, "scenario needs at least 100 replications");
}

void TailScenario::validate() const {
  require(n >= 2, "tail scenario needs n >= 2");
  require(eps > 0.0 && std::isfinite(eps), "tail scenario needs eps > 0");
  require(replications >= 100, "tail scenario needs at least 100 replications");
}

void CircularMseScenario::validate() const {
  require(n >= 2, "circular scenario needs n >= 2");
  require(replications >= 100, "circular scenario needs at least 100 replications");
}

SimTableRow run_mse(const MseScenario& scenario, const RunOptions& options) {
  return run_mse(scenario, make_estimator(scenario.estimator, scenario.generator), options);
}

SimTableRow run_mse(const MseScenario& scenario, const EstimatorFn& estimator,
                    const RunOptions& options) {
  scenario.validate();
  const Complex theta = scenario.theta.value();
  const double scale = static_cast<double>(scenario.n) / (scenario.theta.im() * scenario.theta.im());

  const ReplicationRun run = run_replications(
      scenario.replications, scenario.n, options.workers,
      [&](std::size_t r, std::vector<double>& xs) -> std::optional<double> {
        fill_cauchy(xs, scenario.theta, {scenario.base_seed, r});
        const std::optional<Complex> est = estimator(xs);
        if (!est) return std::nullopt;
        return scale * std::norm(*est - theta);
      });

  if (run.failures == scenario.replications) {
    throw std::runtime_error("all " + std::to_string(run.failures) +
                             " replications failed: " + run.first_failure);
  }
  const Moments m = moments_of(run);
  return {scenario, m.mean, m.stderr_of_mean, run.failures, run.first_failure};
}

TailResult run_tail(const TailScenario& scenario, const RunOptions& options) {
  return run_tail(scenario, make_estimator(scenario.estimator, scenario.generator), options);
}

TailResult run_tail(const TailScenario& scenario, const EstimatorFn& estimator,
                    const RunOptions& options) {
  scenario.validate();
  const Complex theta = scenario.theta.value();

  const ReplicationRun run = run_replications(
      scenario.replications, scenario.n, options.workers,
      [&](std::size_t r, std::vector<double>& xs) -> std::optional<double> {
        fill_cauchy(xs, scenario.theta, {scenario.base_seed, r});
        const std::optional<Complex> est = estimator(xs);
        if (!est) return std::nullopt;
        return std::abs(*est - theta) > scenario.eps ? 1.0 : 0.0;
      });

  if (run.failures == scenario.replications) {
    throw std::runtime_error("all " + std::to_string(run.failures) +
                             " replications failed: " + run.first_failure);
  }
  TailResult out;
  out.scenario = scenario;
  out.failures = run.failures;
  for (const Replicate& rep : run.outcomes) {
    if (rep.ok && rep.value > 0.5) ++out.hits;
  }
  const double m = static_cast<double>(scenario.replications - run.failures);
  out.p_hat = static_cast<double>(out.hits) / m;
  out.mc_stderr_p = std::sqrt(out.p_hat * (1.0 - out.p_hat) / m);
  if (out.hits == 0) {
    out.rate_ratio = std::numeric_limits<double>::infinity();
    out.warnings.push_back("no exceedances observed; rate_ratio reported as +inf");
  } else {
    const double b = bahadur_rate(scenario.eps, scenario.theta);
    out.rate_ratio = -std::log(out.p_hat) / (static_cast<double>(scenario.n) * b);
    if (out.hits < 20) {
      out.warnings.push_back("only " + std::to_string(out.hits) +
                             " exceedances observed; increase replications");
    }
  }
  if (run.failures > 0) {
    out.warnings.push_back(std::to_string(run.failures) + " replications failed: " +
                           run.first_failure);
  }
  return out;
}

CircularSimRow run_circular_mse(const CircularMseScenario& scenario, const RunOptions& options) {
  scenario.validate();
  const Complex w = scenario.w.value();
  const double gap = 1.0 - scenario.w.norm_sq();
  const double scale = static_cast<double>(scenario.n) / (gap * gap);

  const ReplicationRun run = run_replications(
      scenario.replications, scenario.n, options.workers,
      [&](std::size_t r, std::vector<double>& angles) -> std::optional<double> {
        fill_circular(angles, scenario.w, scenario.alpha, {scenario.base_seed, r});
        const CircularEstimate est = circular_estimate(angles, scenario.generator, scenario.alpha,
                                                       scenario.median_adjust);
        return scale * std::norm(est.w.value() - w);
      });

  if (run.failures == scenario.replications) {
    throw std::runtime_error("all " + std::to_string(run.failures) +
                             " replications failed: " + run.first_failure);
  }
  const Moments m = moments_of(run);
  return {scenario, m.mean, m.stderr_of_mean, run.failures, run.first_failure};
}

std::vector<SimTableRow> run_table(std::span<const MseScenario> scenarios, const RunOptions& options) {
  if (scenarios.empty()) throw std::invalid_argument("run_table: no scenarios given");
  std::vector<SimTableRow> rows;
  rows.reserve(scenarios.size());
  for (const MseScenario& s : scenarios) {
    try {
      rows.push_back(run_mse(s, options));
    } catch (const std::exception& e) {
      SimTableRow failed;
      failed.scenario = s;
      failed.statistic = std::numeric_limits<double>::quiet_NaN();
      failed.mc_stderr = std::numeric_limits<double>::quiet_NaN();
      failed.failures = s.replications;
      failed.failure_mode = e.what();
      rows.push_back(std::move(failed));
    }
  }
  return rows;
}

std::vector<MseScenario> one_step_table(const HalfPlanePoint& theta, bool median_adjust,
                                        std::size_t replications, std::uint64_t base_seed) {
  std::vector<MseScenario> out;
  for (std::size_t n : {10u, 50u, 100u, 500u, 1000u}) {
    for (const Generator& g : {Generator::f1(), Generator::f2(), Generator::f3(), Generator::f4()}) {
      out.push_back({theta, n,
                     median_adjust ? EstimatorKind::OneStepMedian : EstimatorKind::OneStep, g,
                     replications, base_seed});
    }
  }
  return out;
}

std::vector<MseScenario> mle_table(std::size_t replications, std::uint64_t base_seed) {
  std::vector<MseScenario> out;
  for (std::size_t n : {10u, 50u, 100u, 500u, 1000u}) {
    out.push_back({HalfPlanePoint(0.0, 1.0), n, EstimatorKind::Mle, Generator::f3(), replications,
                   base_seed});
  }
  return out;
}

std::string to_csv(std::span<const SimTableRow> rows) {
  std::string out = "mu,sigma,n,estimator,generator,replications,failures,statistic,mc_stderr\n";
  for (const SimTableRow& r : rows) {
    const MseScenario& s = r.scenario;
    out += num(s.theta.re()) + ',' + num(s.theta.im()) + ',' + std::to_string(s.n) + ',' +
           std::string(to_string(s.estimator)) + ',' + s.generator.label() + ',' +
           std::to_string(s.replications) + ',' + std::to_string(r.failures) + ',' +
           num(r.statistic) + ',' + num(r.mc_stderr) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const TailResult> rows) {
  std::string out =
      "mu,sigma,n,eps,estimator,generator,replications,failures,hits,p_hat,mc_stderr_p,rate_ratio\n";
  for (const TailResult& r : rows) {
    const TailScenario& s = r.scenario;
    out += num(s.theta.re()) + ',' + num(s.theta.im()) + ',' + std::to_string(s.n) + ',' +
           num(s.eps) + ',' + std::string(to_string(s.estimator)) + ',' + s.generator.label() +
           ',' + std::to_string(s.replications) + ',' + std::to_string(r.failures) + ',' +
           std::to_string(r.hits) + ',' + num(r.p_hat) + ',' + num(r.mc_stderr_p) + ',' +
           num(r.rate_ratio) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const CircularSimRow> rows) {
  std::string out =
      "w_re,w_im,alpha_re,alpha_im,n,estimator,generator,replications,failures,statistic,"
      "mc_stderr\n";
  for (const CircularSimRow& r : rows) {
    const CircularMseScenario& s = r.scenario;
    out += num(s.w.re()) + ',' + num(s.w.im()) + ',' + num(s.alpha.re()) + ',' +
           num(s.alpha.im()) + ',' + std::to_string(s.n) + ',' +
           (s.median_adjust ? "one_step_median" : "one_step") + ',' + s.generator.label() + ',' +
           std::to_string(s.replications) + ',' + std::to_string(r.failures) + ',' +
           num(r.statistic) + ',' + num(r.mc_stderr) + '\n';
  }
  return out;
}

nlohmann::json to_json(const SimTableRow& row) {
  const MseScenario& s = row.scenario;
  nlohmann::json j = {{"mu", s.theta.re()},
                      {"sigma", s.theta.im()},
                      {"n", s.n},
                      {"estimator", to_string(s.estimator)},
                      {"generator", s.generator.label()},
                      {"replications", s.replications},
                      {"base_seed", s.base_seed},
                      {"failures", row.failures},
                      {"statistic", row.statistic},
                      {"mc_stderr", row.mc_stderr}};
  if (!row.failure_mode.empty()) j["failure_mode"] = row.failure_mode;
  return j;
}

nlohmann::json to_json(const TailResult& row) {
  const TailScenario& s = row.scenario;
  nlohmann::json j = {{"mu", s.theta.re()},
                      {"sigma", s.theta.im()},
                      {"n", s.n},
                      {"eps", s.eps},
                      {"estimator", to_string(s.estimator)},
                      {"generator", s.generator.label()},
                      {"replications", s.replications},
                      {"base_seed", s.base_seed},
                      {"failures", row.failures},
                      {"hits", row.hits},
                      {"p_hat", row.p_hat},
                      {"mc_stderr_p", row.mc_stderr_p},
                      {"warnings", row.warnings}};
  // JSON has no infinity; a missing tail event is reported as null.
  j["rate_ratio"] = std::isfinite(row.rate_ratio) ? nlohmann::json(row.rate_ratio) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const CircularSimRow& row) {
  const CircularMseScenario& s = row.scenario;
  nlohmann::json j = {{"w", {s.w.re(), s.w.im()}},
                      {"alpha", {s.alpha.re(), s.alpha.im()}},
                      {"n", s.n},
                      {"estimator", s.median_adjust ? "one_step_median" : "one_step"},
                      {"generator", s.generator.label()},
                      {"replications", s.replications},
                      {"base_seed", s.base_seed},
                      {"failures", row.failures},
                      {"statistic", row.statistic},
                      {"mc_stderr", row.mc_stderr}};
  if (!row.failure_mode.empty()) j["failure_mode"] = row.failure_mode;
  return j;
}

std::vector<MseScenario> mse_scenarios_from_json(const nlohmann::json& doc) {
  return scenarios_from_json<MseScenario>(doc, [](const nlohmann::json&, MseScenario&) {});
}

std::vector<TailScenario> tail_scenarios_from_json(const nlohmann::json& doc) {
  return scenarios_from_json<TailScenario>(
      doc, [](const nlohmann::json& obj, TailScenario& s) { s.eps = obj.at("eps").get<double>(); });
}

}  // namespace cauchy_est
