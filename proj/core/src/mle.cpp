#include "cauchy_est/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cauchy_est/errors.hpp"
#include "cauchy_est/estimators.hpp"

namespace cauchy_est {

namespace {

struct Evaluation {
  double log_lik;
  Complex score;
  // Gradient and Hessian of log_lik in (mu, sigma).
  double g_mu, g_sigma;
  double h_mm, h_ms, h_ss;
};

// Log-likelihood, mean score and second derivatives in one pass.
Evaluation evaluate(std::span<const double> xs, const HalfPlanePoint& t) {
  const double mu = t.re();
  const double s = t.im();
  double sum_log = 0.0;
  Complex sum_h{0.0, 0.0};
  double g_mu = 0.0, g_s = 0.0, c = 0.0, h_ms = 0.0;
  for (double x : xs) {
    const double a = x - mu;
    const double r2 = a * a + s * s;
    sum_log += std::log(r2);
    sum_h += mobius_h(x, t);
    g_mu += 2.0 * a / r2;
    g_s += 2.0 * s / r2;
    c += 2.0 * (a * a - s * s) / (r2 * r2);
    h_ms -= 4.0 * a * s / (r2 * r2);
  }
  const double n = static_cast<double>(xs.size());
  return {n * (std::log(s) - std::log(std::numbers::pi)) - sum_log,
          sum_h / n,
          g_mu,
          n / s - g_s,
          c,
          h_ms,
          -n / (s * s) - c};
}

// Newton direction when the observed information is positive definite,
// otherwise the complex scoring step 2 Im(theta) i score. Scoring alone
// converges only linearly on small, widely spread batches.
Complex ascent_direction(const Evaluation& e, const HalfPlanePoint& theta) {
  const double det = e.h_mm * e.h_ss - e.h_ms * e.h_ms;
  if (e.h_mm < 0.0 && det > 0.0 && std::isfinite(det)) {
    const double d_mu = -(e.h_ss * e.g_mu - e.h_ms * e.g_sigma) / det;
    const double d_s = -(-e.h_ms * e.g_mu + e.h_mm * e.g_sigma) / det;
    if (std::isfinite(d_mu) && std::isfinite(d_s)) return {d_mu, d_s};
  }
  return 2.0 * theta.im() * Complex{-e.score.imag(), e.score.real()};
}

HalfPlanePoint fallback_start(std::span<const double> xs) {
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double m = median(xs, MedianRule::Plain);
  double spread = 0.5 * (v[(3 * v.size()) / 4] - v[v.size() / 4]);
  if (!(spread > 0.0)) {
    double mad = 0.0;
    for (double x : v) mad += std::fabs(x - m);
    spread = mad / static_cast<double>(v.size());
  }
  if (!(spread > 0.0)) spread = 1.0;
  return {m, spread};
}

}  // namespace

void SolverConfig::validate() const {
  if (!(score_tol > 0.0) || !(step_tol > 0.0) || max_iters <= 0) {
    throw std::invalid_argument("solver tolerances and iteration cap must be positive");
  }
}

Complex score(std::span<const double> xs, const HalfPlanePoint& t) {
  if (xs.empty()) throw std::invalid_argument("score: needs at least 1 sample");
  Complex sum{0.0, 0.0};
  for (double x : xs) sum += mobius_h(x, t);
  return sum / static_cast<double>(xs.size());
}

double log_likelihood(std::span<const double> xs, const HalfPlanePoint& t) {
  if (xs.empty()) throw std::invalid_argument("log_likelihood: needs at least 1 sample");
  double sum = 0.0;
  for (double x : xs) sum += log_density(x, t);
  return sum;
}

double fisher_info_scalar(std::size_t n, const HalfPlanePoint& t) {
  if (n == 0) throw std::invalid_argument("fisher_info_scalar: n must be at least 1");
  return static_cast<double>(n) / (2.0 * t.im() * t.im());
}

MleResult mle_from(std::span<const double> xs, const HalfPlanePoint& start, const SolverConfig& cfg) {
  cfg.validate();
  if (xs.size() < 3) throw std::invalid_argument("mle_from: needs at least 3 samples");

  HalfPlanePoint theta = start;
  Evaluation current = evaluate(xs, theta);
  MleResult result{theta, 0, 0.0, false};

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if (std::abs(current.score) < cfg.score_tol) break;
    const Complex step = ascent_direction(current, theta);
    // Rounding noise of the summed log-likelihood near the optimum.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         (std::fabs(current.log_lik) + static_cast<double>(xs.size()));

    bool accepted = false;
    bool small_move = false;
    double scale = 1.0;
    for (int halvings = 0; halvings <= 60 && !accepted; ++halvings, scale *= 0.5) {
      const Complex cand = theta.value() + scale * step;
      if (!std::isfinite(cand.real()) || !(cand.imag() >= HalfPlanePoint::kMinImag)) continue;
      const HalfPlanePoint next(cand);
      const Evaluation eval = evaluate(xs, next);
      if (eval.log_lik < current.log_lik - slack) continue;
      small_move = std::abs(cand - theta.value()) / theta.im() < cfg.step_tol;
      theta = next;
      current = eval;
      accepted = true;
      result.iterations = iter + 1;
    }
    if (!accepted || small_move) break;
  }

  result.theta_hat = theta;
  result.final_score_norm = std::abs(current.score);
  result.converged = result.final_score_norm < cfg.score_tol;
  return result;
}

MleResult mle(std::span<const double> xs, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("mle: needs at least 2 samples");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi) {
    if (n == 2) throw std::invalid_argument("mle: two equal samples have no MLE in the half-plane");
    throw DegenerateError("mle: all samples are identical");
  }
  if (n == 2) {
    const HalfPlanePoint theta(0.5 * (*lo + *hi), 0.5 * (*hi - *lo));
    const double norm = std::abs(score(xs, theta));
    return {theta, 0, norm, norm < cfg.score_tol};
  }

  HalfPlanePoint start = fallback_start(xs);
  try {
    start = estimate_pipeline(Generator::f3(), xs, false).estimate;
  } catch (const DegenerateError&) {
  }
  return mle_from(xs, start, cfg);
}

}  // namespace cauchy_est
