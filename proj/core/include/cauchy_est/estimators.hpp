#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cauchy_est/geometry.hpp"

namespace cauchy_est {

enum class GeneratorKind { Log, Reciprocal };

/// Generator f of a quasi-arithmetic mean f^{-1}(mean f(X_j)).
///   Log(alpha):        f(x) = log(x + alpha),  Im(alpha) >= 0
///   Reciprocal(alpha): f(x) = 1 / (x + alpha), Im(alpha) > 0
class Generator {
 public:
  static Generator log(Complex alpha);
  static Generator reciprocal(Complex alpha);

  /// Presets used by the simulation tables: f1 = Log(0), f2 = Log(i),
  /// f3 = Reciprocal(i), f4 = Reciprocal(2i).
  static Generator f1() { return log({0.0, 0.0}); }
  static Generator f2() { return log({0.0, 1.0}); }
  static Generator f3() { return reciprocal({0.0, 1.0}); }
  static Generator f4() { return reciprocal({0.0, 2.0}); }

  /// Accepts "f1".."f4", "log:a+bi" and "recip:a+bi".
  static Generator parse(std::string_view text);

  GeneratorKind kind() const { return kind_; }
  Complex alpha() const { return alpha_; }

  /// "f1".."f4" for presets, otherwise "log:a+bi" / "recip:a+bi".
  std::string label() const;

  /// Log uses the principal branch with argument in [0, pi]. Throws
  /// DomainError when z + alpha = 0 (a sample on the branch point).
  Complex forward(Complex z) const;
  Complex forward(double x) const;

  /// exp(y) - alpha or 1/y - alpha. Throws DegenerateError for a
  /// reciprocal generator when |y| < 1e-300.
  Complex inverse(Complex y) const;

  friend bool operator==(const Generator&, const Generator&) = default;

 private:
  Generator(GeneratorKind kind, Complex alpha) : kind_(kind), alpha_(alpha) {}

  GeneratorKind kind_;
  Complex alpha_;
};

inline Complex generator_forward(const Generator& g, double x) { return g.forward(x); }
inline Complex generator_inverse(const Generator& g, Complex y) { return g.inverse(y); }

/// Result of a closed-form initial estimator. `value` is empty when the
/// estimate is not in the open half-plane, counting an imaginary part below
/// 8 ulp of |raw| as zero; `raw` always carries the computed point.
struct EstimateOutcome {
  std::optional<HalfPlanePoint> value;
  Complex raw;
  bool boundary_hit = false;
  /// |mean of f(X_j)|
  double mean_magnitude = 0.0;

  bool degenerate() const { return !value.has_value(); }
};

enum class MedianRule {
  /// Even n: mean of the two middle order statistics. Odd n >= 5: mean of the
  /// three central order statistics.
  ThreePoint,
  /// Even n as above; odd n: the middle order statistic.
  Plain,
};

/// Y_n = f^{-1}(mean f(X_j)). Requires n >= 2.
EstimateOutcome qam_estimate(const Generator& g, std::span<const double> xs);

double median(std::span<const double> xs, MedianRule rule = MedianRule::ThreePoint);

/// Y~_n = M_n + f^{-1}(mean f(X_j - M_n)) with M_n = median(xs, rule).
/// With MedianRule::Plain and a real-shift Log generator, odd n is rejected
/// because a centered sample then sits on the branch point.
EstimateOutcome qam_estimate_median_adjusted(const Generator& g, std::span<const double> xs,
                                             MedianRule rule = MedianRule::ThreePoint);

struct OneStepResult {
  HalfPlanePoint value;
  /// Number of times the scoring step was halved to keep Im > 0.
  int halvings = 0;
};

/// One Fisher-scoring step from `start`:
///   Z = Y + (2 Im(Y) i / n) sum_j (X_j - Y) / (X_j - conj(Y)).
OneStepResult one_step(std::span<const double> xs, const HalfPlanePoint& start);

struct PipelineResult {
  HalfPlanePoint initial;
  HalfPlanePoint estimate;
  int halvings = 0;
};

/// Quasi-arithmetic mean (optionally median-adjusted) followed by one_step.
/// Throws DegenerateError naming the generator when the initial estimate is
/// not in the open half-plane.
PipelineResult estimate_pipeline(const Generator& g, std::span<const double> xs, bool median_adjust,
                                 MedianRule rule = MedianRule::ThreePoint);

struct CircularEstimate {
  PipelineResult halfplane;
  DiskPoint w;
};

/// Pulls the angles back through phi_alpha^{-1}, runs estimate_pipeline and
/// maps the result forward: W_n = phi_alpha(Z_n).
CircularEstimate circular_estimate(std::span<const double> angles, const Generator& g,
                                   const HalfPlanePoint& alpha, bool median_adjust,
                                   MedianRule rule = MedianRule::ThreePoint);

}  // namespace cauchy_est
