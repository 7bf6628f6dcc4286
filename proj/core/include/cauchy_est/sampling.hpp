#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cauchy_est/geometry.hpp"

namespace cauchy_est {

/// Identifies one reproducible uniform stream. Simulations use the
/// replication index as stream_index.
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t stream_index = 0;
};

/// Uniform(0,1) stream for a SeedSpec. The engine is std::mt19937_64 seeded
/// through std::seed_seq with the four 32-bit halves of (base_seed,
/// stream_index); both are fully specified by the standard, so the output is
/// bit-identical across platforms and independent of scheduling.
class UniformStream {
 public:
  static constexpr double kLowest = 0x1.0p-64;
  static constexpr double kHighest = 1.0 - 0x1.0p-53;

  explicit UniformStream(const SeedSpec& seed);

  /// 53-bit uniform clamped to [2^-64, 1 - 2^-53].
  double next();

 private:
  std::mt19937_64 engine_;
};

/// Ordered finite real observations, n >= 1.
class SampleBatch {
 public:
  explicit SampleBatch(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  operator std::span<const double>() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Ordered circle angles, each in [0, 2pi).
class AngleBatch {
 public:
  explicit AngleBatch(std::vector<double> angles);

  std::size_t size() const { return angles_.size(); }
  std::span<const double> angles() const { return angles_; }
  operator std::span<const double>() const { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }

 private:
  std::vector<double> angles_;
};

/// mu + sigma tan(pi (u - 1/2)); u must lie in (0, 1).
double cauchy_quantile(double u, const HalfPlanePoint& theta);

/// 1/2 + atan((x - mu) / sigma) / pi.
double cauchy_cdf(double x, const HalfPlanePoint& theta);

/// Fills `out` with i.i.d. C(theta) draws from the stream for `seed`.
void fill_cauchy(std::span<double> out, const HalfPlanePoint& theta, const SeedSpec& seed);

SampleBatch sample_cauchy(std::size_t n, const HalfPlanePoint& theta, const SeedSpec& seed);

/// Circular Cauchy draws: X ~ C(phi_alpha^{-1}(w)) pushed to the circle by
/// phi_alpha. The law of the angles does not depend on alpha.
void fill_circular(std::span<double> out, const DiskPoint& w, const HalfPlanePoint& alpha,
                   const SeedSpec& seed);

AngleBatch sample_circular(std::size_t n, const DiskPoint& w, const HalfPlanePoint& alpha,
                           const SeedSpec& seed);

}  // namespace cauchy_est
