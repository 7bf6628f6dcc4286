#include "cauchy_est/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cauchy_est/complex_literal.hpp"
#include "cauchy_est/errors.hpp"

namespace cauchy_est {

namespace {

// 1 / (re + i im) by Smith's method.
Complex reciprocal_of(double re, double im) {
  if (std::fabs(re) >= std::fabs(im)) {
    const double r = im / re;
    const double den = re + im * r;
    return {1.0 / den, -r / den};
  }
  const double r = re / im;
  const double den = re * r + im;
  return {r / den, -1.0 / den};
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

EstimateOutcome make_outcome(Complex raw, double mean_magnitude) {
  EstimateOutcome out;
  out.raw = raw;
  out.mean_magnitude = mean_magnitude;
  // An imaginary part at rounding level of |raw| is the real axis: e.g. Log(0)
  // on all-negative samples gives exp(i pi) with Im ~ 1e-16.
  const double rounding_floor = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(raw);
  if (is_finite(raw) && raw.imag() >= HalfPlanePoint::kMinImag && raw.imag() > rounding_floor) {
    out.value = HalfPlanePoint(raw);
  } else {
    out.boundary_hit = true;
  }
  return out;
}

Complex mean_forward(const Generator& g, std::span<const double> xs, double shift) {
  Complex sum{0.0, 0.0};
  for (double x : xs) sum += g.forward(x - shift);
  return sum / static_cast<double>(xs.size());
}

void require_pair(std::span<const double> xs, const char* who) {
  if (xs.size() < 2) throw std::invalid_argument(std::string(who) + ": needs at least 2 samples");
}

}  // namespace

Generator Generator::log(Complex alpha) {
  if (!is_finite(alpha) || alpha.imag() < 0.0) {
    throw std::invalid_argument("log generator needs a finite shift with Im(alpha) >= 0");
  }
  return {GeneratorKind::Log, {alpha.real(), alpha.imag() + 0.0}};
}

Generator Generator::reciprocal(Complex alpha) {
  if (!is_finite(alpha) || !(alpha.imag() > 0.0)) {
    throw std::invalid_argument("reciprocal generator needs a finite shift with Im(alpha) > 0");
  }
  return {GeneratorKind::Reciprocal, alpha};
}

Generator Generator::parse(std::string_view text) {
  if (text == "f1") return f1();
  if (text == "f2") return f2();
  if (text == "f3") return f3();
  if (text == "f4") return f4();
  if (text.starts_with("log:")) return log(parse_complex(text.substr(4)));
  if (text.starts_with("recip:")) return reciprocal(parse_complex(text.substr(6)));
  throw std::invalid_argument("unknown generator '" + std::string(text) +
                              "' (expected f1..f4, log:a+bi or recip:a+bi)");
}

std::string Generator::label() const {
  if (*this == f1()) return "f1";
  if (*this == f2()) return "f2";
  if (*this == f3()) return "f3";
  if (*this == f4()) return "f4";
  return (kind_ == GeneratorKind::Log ? "log:" : "recip:") + format_complex(alpha_);
}

Complex Generator::forward(Complex z) const {
  const double re = z.real() + alpha_.real();
  // Adding +0.0 maps a signed zero to +0 so the negative real axis gets arg = pi.
  const double im = z.imag() + alpha_.imag() + 0.0;
  if (kind_ == GeneratorKind::Reciprocal) return reciprocal_of(re, im);
  if (re == 0.0 && im == 0.0) {
    throw DomainError("sample at branch point of " + label());
  }
  double log_mod = 0.5 * std::log(re * re + im * im);
  if (!std::isfinite(log_mod)) log_mod = std::log(std::hypot(re, im));
  return {log_mod, std::atan2(im, re)};
}

Complex Generator::forward(double x) const { return forward(Complex{x, 0.0}); }

Complex Generator::inverse(Complex y) const {
  if (kind_ == GeneratorKind::Log) return std::exp(y) - alpha_;
  if (std::abs(y) < 1e-300) {
    throw DegenerateError("mean of " + label() + " vanished; cannot invert");
  }
  return reciprocal_of(y.real(), y.imag()) - alpha_;
}

EstimateOutcome qam_estimate(const Generator& g, std::span<const double> xs) {
  require_pair(xs, "qam_estimate");
  const Complex mean = mean_forward(g, xs, 0.0);
  return make_outcome(g.inverse(mean), std::abs(mean));
}

double median(std::span<const double> xs, MedianRule rule) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("median: needs at least 2 samples");
  std::vector<double> v(xs.begin(), xs.end());
  if (n % 2 == 0) {
    const auto upper = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), upper, v.end());
    const double lower = *std::max_element(v.begin(), upper);
    return 0.5 * (lower + *upper);
  }
  const std::size_t mid = n / 2;
  const auto it = v.begin() + static_cast<std::ptrdiff_t>(mid);
  std::nth_element(v.begin(), it, v.end());
  if (rule == MedianRule::Plain) return *it;
  if (n < 5) {
    throw UnsupportedError("three-point median needs n >= 5 for odd sample sizes");
  }
  const double below = *std::max_element(v.begin(), it);
  const double above = *std::min_element(it + 1, v.end());
  return (below + *it + above) / 3.0;
}

EstimateOutcome qam_estimate_median_adjusted(const Generator& g, std::span<const double> xs,
                                             MedianRule rule) {
  require_pair(xs, "qam_estimate_median_adjusted");
  if (rule == MedianRule::Plain && xs.size() % 2 == 1 && g.kind() == GeneratorKind::Log &&
      g.alpha().imag() == 0.0) {
    throw DomainError("sample at branch point of " + g.label() +
                      ": odd n with the plain median centers a sample at 0");
  }
  const double m = median(xs, rule);
  const Complex mean = mean_forward(g, xs, m);
  return make_outcome(m + g.inverse(mean), std::abs(mean));
}

OneStepResult one_step(std::span<const double> xs, const HalfPlanePoint& start) {
  if (xs.empty()) throw std::invalid_argument("one_step: needs at least 1 sample");
  Complex sum{0.0, 0.0};
  for (double x : xs) sum += mobius_h(x, start);
  const double n = static_cast<double>(xs.size());
  // (2 Im(Y) i / n) * S
  const Complex step = (2.0 * start.im() / n) * Complex{-sum.imag(), sum.real()};

  double scale = 1.0;
  for (int halvings = 0; halvings <= 60; ++halvings) {
    const Complex z = start.value() + scale * step;
    if (is_finite(z) && z.imag() >= HalfPlanePoint::kMinImag) {
      return {HalfPlanePoint(z), halvings};
    }
    scale *= 0.5;
  }
  throw std::logic_error("one_step: step halving failed to keep Im > 0");
}

PipelineResult estimate_pipeline(const Generator& g, std::span<const double> xs, bool median_adjust,
                                 MedianRule rule) {
  const EstimateOutcome y =
      median_adjust ? qam_estimate_median_adjusted(g, xs, rule) : qam_estimate(g, xs);
  if (y.degenerate()) {
    throw DegenerateError("degenerate initializer: generator " + g.label() +
                          " gave Im(Y) = " + std::to_string(y.raw.imag()));
  }
  const OneStepResult z = one_step(xs, *y.value);
  return {*y.value, z.value, z.halvings};
}

CircularEstimate circular_estimate(std::span<const double> angles, const Generator& g,
                                   const HalfPlanePoint& alpha, bool median_adjust,
                                   MedianRule rule) {
  std::vector<double> xs(angles.size());
  std::transform(angles.begin(), angles.end(), xs.begin(),
                 [&](double a) { return angle_to_real(a, alpha); });
  const PipelineResult fit = estimate_pipeline(g, xs, median_adjust, rule);
  const Complex w = h_extended(fit.estimate.value(), alpha);
  if (!(std::norm(w) <= 1.0 - DiskPoint::kBoundaryGap)) {
    throw DegenerateError("circular estimate fell on the unit circle");
  }
  return {fit, DiskPoint(w)};
}

}  // namespace cauchy_est
