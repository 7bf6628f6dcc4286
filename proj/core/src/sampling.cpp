#include "cauchy_est/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cauchy_est {

namespace {

std::seed_seq make_seed_seq(const SeedSpec& seed) {
  return {static_cast<std::uint32_t>(seed.base_seed & 0xffffffffu),
          static_cast<std::uint32_t>(seed.base_seed >> 32),
          static_cast<std::uint32_t>(seed.stream_index & 0xffffffffu),
          static_cast<std::uint32_t>(seed.stream_index >> 32)};
}

}  // namespace

UniformStream::UniformStream(const SeedSpec& seed) {
  auto seq = make_seed_seq(seed);
  engine_.seed(seq);
}

double UniformStream::next() {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return std::clamp(u, kLowest, kHighest);
}

SampleBatch::SampleBatch(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("sample batch must not be empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("sample batch values must be finite");
  }
}

AngleBatch::AngleBatch(std::vector<double> angles) : angles_(std::move(angles)) {
  if (angles_.empty()) throw std::invalid_argument("angle batch must not be empty");
  for (double a : angles_) {
    if (!(a >= 0.0 && a < 2.0 * std::numbers::pi)) {
      throw std::invalid_argument("angles must lie in [0, 2pi)");
    }
  }
}

double cauchy_quantile(double u, const HalfPlanePoint& theta) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("cauchy_quantile: u must lie in (0, 1)");
  return theta.re() + theta.im() * std::tan(std::numbers::pi * (u - 0.5));
}

double cauchy_cdf(double x, const HalfPlanePoint& theta) {
  return 0.5 + std::atan((x - theta.re()) / theta.im()) / std::numbers::pi;
}

void fill_cauchy(std::span<double> out, const HalfPlanePoint& theta, const SeedSpec& seed) {
  UniformStream stream(seed);
  for (double& x : out) x = cauchy_quantile(stream.next(), theta);
}

SampleBatch sample_cauchy(std::size_t n, const HalfPlanePoint& theta, const SeedSpec& seed) {
  if (n == 0) throw std::invalid_argument("sample_cauchy: n must be at least 1");
  std::vector<double> values(n);
  fill_cauchy(values, theta, seed);
  return SampleBatch(std::move(values));
}

void fill_circular(std::span<double> out, const DiskPoint& w, const HalfPlanePoint& alpha,
                   const SeedSpec& seed) {
  const HalfPlanePoint theta = mobius_to_halfplane(w, alpha);
  fill_cauchy(out, theta, seed);
  for (double& x : out) x = real_to_angle(x, alpha);
}

AngleBatch sample_circular(std::size_t n, const DiskPoint& w, const HalfPlanePoint& alpha,
                           const SeedSpec& seed) {
  if (n == 0) throw std::invalid_argument("sample_circular: n must be at least 1");
  std::vector<double> angles(n);
  fill_circular(angles, w, alpha, seed);
  return AngleBatch(std::move(angles));
}

}  // namespace cauchy_est
