#include "cauchy_est/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cauchy_est/errors.hpp"

namespace cauchy_est {

namespace {

std::string fmt_pair(double re, double im) {
  return "(" + std::to_string(re) + ", " + std::to_string(im) + ")";
}

}  // namespace

HalfPlanePoint::HalfPlanePoint(double re, double im) : re_(re), im_(im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::invalid_argument("half-plane point must be finite, got " + fmt_pair(re, im));
  }
  if (!(im >= kMinImag)) {
    throw std::invalid_argument("half-plane point needs a positive imaginary part, got " +
                                fmt_pair(re, im));
  }
}

DiskPoint::DiskPoint(double re, double im) : re_(re), im_(im) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw std::invalid_argument("disk point must be finite, got " + fmt_pair(re, im));
  }
  if (!(re * re + im * im <= 1.0 - kBoundaryGap)) {
    throw std::invalid_argument("disk point must lie inside the unit disk, got " + fmt_pair(re, im));
  }
}

Sl2Matrix::Sl2Matrix(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!std::isfinite(det) || !(det > 0.0)) {
    throw std::invalid_argument("SL(2,R) element needs a positive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  a_ = a * s;
  b_ = b * s;
  c_ = c * s;
  d_ = d * s;
}

Sl2Matrix operator*(const Sl2Matrix& lhs, const Sl2Matrix& rhs) {
  return {lhs.a_ * rhs.a_ + lhs.b_ * rhs.c_, lhs.a_ * rhs.b_ + lhs.b_ * rhs.d_,
          lhs.c_ * rhs.a_ + lhs.d_ * rhs.c_, lhs.c_ * rhs.b_ + lhs.d_ * rhs.d_};
}

Complex mobius_h(double x, const HalfPlanePoint& t) {
  // (a - i s) / (a + i s) with a = x - mu, s = sigma, scaled by the larger of |a| and s.
  const double a = x - t.re();
  const double s = t.im();
  if (std::fabs(a) >= s) {
    const double q = s / a;
    const double denom = 1.0 + q * q;
    return {(1.0 - q * q) / denom, -2.0 * q / denom};
  }
  const double q = a / s;
  const double denom = q * q + 1.0;
  return {(q * q - 1.0) / denom, -2.0 * q / denom};
}

Complex h_extended(Complex z, const HalfPlanePoint& t) {
  if (z.imag() < 0.0) {
    throw std::invalid_argument("h_extended: first argument must lie in the closed upper half-plane");
  }
  const Complex denom = z - t.conj();
  if (denom == Complex{0.0, 0.0}) {
    throw DomainError("h_extended: z coincides with conj(t)");
  }
  return (z - t.value()) / denom;
}

Complex mobius_to_disk(Complex z, const HalfPlanePoint& alpha) {
  if (z.imag() == 0.0) return mobius_h(z.real(), alpha);
  return h_extended(z, alpha);
}

DiskPoint mobius_to_disk(const HalfPlanePoint& z, const HalfPlanePoint& alpha) {
  return DiskPoint(h_extended(z.value(), alpha));
}

HalfPlanePoint mobius_to_halfplane(const DiskPoint& w, const HalfPlanePoint& alpha) {
  const Complex wc = w.value();
  const Complex one_minus_w = 1.0 - wc;
  const Complex z = (alpha.value() - alpha.conj() * wc) / one_minus_w;
  // Im(phi^{-1}(w)) = Im(alpha) (1 - |w|^2) / |1 - w|^2, positive by construction.
  const double im = alpha.im() * (1.0 - w.norm_sq()) / std::norm(one_minus_w);
  return {z.real(), im};
}

double mobius_circle_to_real(Complex w, const HalfPlanePoint& alpha) {
  if (w == Complex{1.0, 0.0}) {
    throw DomainError("inverse Moebius map has a pole at w = 1");
  }
  return ((alpha.value() - alpha.conj() * w) / (1.0 - w)).real();
}

double angle_to_real(double angle, const HalfPlanePoint& alpha) {
  if (!std::isfinite(angle)) throw std::invalid_argument("angle_to_real: angle must be finite");
  const double half = 0.5 * angle;
  const double sn = std::sin(half);
  if (sn == 0.0) {
    throw DomainError("inverse Moebius map has a pole at exp(i angle) = 1");
  }
  return alpha.re() - alpha.im() * std::cos(half) / sn;
}

double real_to_angle(double x, const HalfPlanePoint& alpha) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double angle = 2.0 * std::atan2(alpha.im(), alpha.re() - x);
  // atan2 can round up to pi when Im(alpha) is negligible against |x|.
  return angle < kTwoPi ? angle : std::nextafter(kTwoPi, 0.0);
}

Complex mobius_to_disk_derivative(Complex z, const HalfPlanePoint& alpha) {
  const Complex d = z - alpha.conj();
  return (alpha.value() - alpha.conj()) / (d * d);
}

HalfPlanePoint sl2_act(const Sl2Matrix& A, const HalfPlanePoint& z) {
  const Complex num = A.a() * z.value() + A.b();
  const Complex den = A.c() * z.value() + A.d();
  const Complex w = num / den;
  // With unit determinant, Im(A z) = Im(z) / |cz + d|^2.
  return {w.real(), z.im() / std::norm(den)};
}

double maximal_invariant(const HalfPlanePoint& gamma, const HalfPlanePoint& theta) {
  return std::norm(gamma.value() - theta.value()) / (4.0 * gamma.im() * theta.im());
}

double kl_halfplane(const HalfPlanePoint& from, const HalfPlanePoint& to) {
  return std::log1p(maximal_invariant(from, to));
}

double kl_circular(const DiskPoint& from, const DiskPoint& to) {
  const double num = std::norm(from.value() - to.value());
  return std::log1p(num / ((1.0 - from.norm_sq()) * (1.0 - to.norm_sq())));
}

double bahadur_rate(double eps, const HalfPlanePoint& theta) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("bahadur_rate: eps must be positive and finite");
  }
  const double s = theta.im();
  return std::log1p(eps * eps / (4.0 * s * (s + eps)));
}

double bahadur_rate_circular(double eps, const DiskPoint& w) {
  const double r = std::sqrt(w.norm_sq());
  if (!(eps > 0.0) || !(eps < 1.0 - r)) {
    throw std::invalid_argument("bahadur_rate_circular: eps must lie in (0, 1 - |w|)");
  }
  const double outer = r + eps;
  return std::log1p(eps * eps / ((1.0 - w.norm_sq()) * (1.0 - outer * outer)));
}

double log_density(double x, const HalfPlanePoint& theta) {
  if (!std::isfinite(x)) throw std::invalid_argument("log_density: x must be finite");
  const double r = std::hypot(x - theta.re(), theta.im());
  return std::log(theta.im()) - std::log(std::numbers::pi) - 2.0 * std::log(r);
}

double circular_log_density(double angle, const DiskPoint& w) {
  if (!(angle >= 0.0 && angle < 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("circular_log_density: angle must lie in [0, 2pi)");
  }
  const Complex e{std::cos(angle), std::sin(angle)};
  return std::log1p(-w.norm_sq()) - std::log(2.0 * std::numbers::pi) -
         std::log(std::norm(e - w.value()));
}

}  // namespace cauchy_est
