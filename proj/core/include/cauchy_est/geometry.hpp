#pragma once

#include <complex>

namespace cauchy_est {

using Complex = std::complex<double>;

/// A point theta = mu + sigma*i of the open upper half-plane. Construction
/// rejects non-finite parts and sigma below kMinImag.
class HalfPlanePoint {
 public:
  static constexpr double kMinImag = 1e-300;

  HalfPlanePoint(double re, double im);
  explicit HalfPlanePoint(Complex z) : HalfPlanePoint(z.real(), z.imag()) {}

  double re() const { return re_; }
  double im() const { return im_; }
  double location() const { return re_; }
  double scale() const { return im_; }
  Complex value() const { return {re_, im_}; }
  Complex conj() const { return {re_, -im_}; }

  friend bool operator==(const HalfPlanePoint&, const HalfPlanePoint&) = default;

 private:
  double re_;
  double im_;
};

/// A circular Cauchy parameter w with |w|^2 <= 1 - kBoundaryGap.
class DiskPoint {
 public:
  static constexpr double kBoundaryGap = 1e-12;

  DiskPoint(double re, double im);
  explicit DiskPoint(Complex w) : DiskPoint(w.real(), w.imag()) {}

  double re() const { return re_; }
  double im() const { return im_; }
  Complex value() const { return {re_, im_}; }
  double norm_sq() const { return re_ * re_ + im_ * im_; }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  double re_;
  double im_;
};

/// Element of SL(2,R). The constructor accepts any real matrix with positive
/// determinant and rescales it to unit determinant.
class Sl2Matrix {
 public:
  Sl2Matrix(double a, double b, double c, double d);

  static Sl2Matrix identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double det() const { return a_ * d_ - b_ * c_; }

  friend Sl2Matrix operator*(const Sl2Matrix& lhs, const Sl2Matrix& rhs);

 private:
  double a_, b_, c_, d_;
};

// Moebius kernel -----------------------------------------------------------

/// h(x, t) = (x - t) / (x - conj(t)) for real x. Always of unit modulus.
Complex mobius_h(double x, const HalfPlanePoint& t);

/// The same kernel at a complex first argument with Im(z) >= 0.
Complex h_extended(Complex z, const HalfPlanePoint& t);

/// phi_alpha(z) = h(z, alpha); maps the closed half-plane onto the closed disk.
Complex mobius_to_disk(Complex z, const HalfPlanePoint& alpha);
DiskPoint mobius_to_disk(const HalfPlanePoint& z, const HalfPlanePoint& alpha);

/// phi_alpha^{-1}(w) = (alpha - conj(alpha) w) / (1 - w).
HalfPlanePoint mobius_to_halfplane(const DiskPoint& w, const HalfPlanePoint& alpha);

/// phi_alpha^{-1} for w on the unit circle (w != 1); the image is real.
double mobius_circle_to_real(Complex w, const HalfPlanePoint& alpha);

/// Boundary map in angle form: the real x with phi_alpha(x) = exp(i angle),
/// i.e. Re(alpha) - Im(alpha) cot(angle / 2). Throws DomainError at angle 0.
double angle_to_real(double angle, const HalfPlanePoint& alpha);

/// arg(phi_alpha(x)) in (0, 2pi) for real x.
double real_to_angle(double x, const HalfPlanePoint& alpha);

/// phi_alpha'(z) = (alpha - conj(alpha)) / (z - conj(alpha))^2.
Complex mobius_to_disk_derivative(Complex z, const HalfPlanePoint& alpha);

HalfPlanePoint sl2_act(const Sl2Matrix& A, const HalfPlanePoint& z);

// Divergences and rates ----------------------------------------------------

/// |gamma - theta|^2 / (4 Im(gamma) Im(theta)).
double maximal_invariant(const HalfPlanePoint& gamma, const HalfPlanePoint& theta);

/// KL divergence K(P_from | P_to) between Cauchy laws, log1p of the maximal
/// invariant. Symmetric in its arguments.
double kl_halfplane(const HalfPlanePoint& from, const HalfPlanePoint& to);

/// KL divergence between circular Cauchy laws.
double kl_circular(const DiskPoint& from, const DiskPoint& to);

/// b(eps, theta) = log(1 + eps^2 / (4 sigma (sigma + eps))). Throws
/// std::invalid_argument for eps <= 0.
double bahadur_rate(double eps, const HalfPlanePoint& theta);

/// Circular analogue; eps must lie in (0, 1 - |w|).
double bahadur_rate_circular(double eps, const DiskPoint& w);

// Densities ----------------------------------------------------------------

double log_density(double x, const HalfPlanePoint& theta);
double circular_log_density(double angle, const DiskPoint& w);

}  // namespace cauchy_est
