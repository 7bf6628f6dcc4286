#pragma once

#include <span>

#include "cauchy_est/geometry.hpp"

namespace cauchy_est {

struct SolverConfig {
  double score_tol = 1e-12;
  /// Stop when |theta_{k+1} - theta_k| / Im(theta_k) falls below this.
  double step_tol = 1e-14;
  int max_iters = 200;

  void validate() const;
};

struct MleResult {
  HalfPlanePoint theta_hat;
  int iterations = 0;
  /// |sum_j h(X_j, theta_hat)| / n
  double final_score_norm = 0.0;
  bool converged = false;
};

/// (1/n) sum_j h(X_j, t). The likelihood equation is score == 0.
Complex score(std::span<const double> xs, const HalfPlanePoint& t);

double log_likelihood(std::span<const double> xs, const HalfPlanePoint& t);

/// n / (2 Im(t)^2), the diagonal entry of the Fisher information I_n(t).
double fisher_info_scalar(std::size_t n, const HalfPlanePoint& t);

/// Joint location-scale MLE by iterated complex Fisher scoring
///   theta <- theta + 2 Im(theta) i score(theta),
/// started from the f3 one-step estimate. Where the observed information is
/// positive definite a Newton step replaces the scoring step. Each step is
/// halved until Im stays positive and the log-likelihood does not decrease.
///
/// n == 1 and n == 2 with equal points throw std::invalid_argument; n == 2
/// with distinct points returns midpoint + half-range i. A batch of identical
/// values throws DegenerateError. Non-convergence is reported through
/// MleResult::converged rather than thrown.
MleResult mle(std::span<const double> xs, const SolverConfig& cfg = {});

/// Same solver from a caller-chosen starting point.
MleResult mle_from(std::span<const double> xs, const HalfPlanePoint& start,
                   const SolverConfig& cfg = {});

}  // namespace cauchy_est
