#ifndef BETAGOS_RNG_HPP
#define BETAGOS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace betagos {

// Seeded stream based on splitmix64 (Steele, Lea & Flood 2014; output mix by
// Vigna). Every stream remembers the seed it was created with, so substreams
// derived with split() depend only on (seed, index) and never on how many
// draws the parent has consumed. All distributions are implemented on top of
// next_u64() to keep results bit-reproducible across platforms and thread
// schedules.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Derive an independent child stream from (seed, index).
  RngStream split(std::uint64_t index) const {
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return RngStream(z ^ (z >> 31));
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so logs stay finite.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller. Two uniforms per draw; the sine branch is discarded.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Marsaglia-Tsang squeeze for shape >= 1, boosted for shape < 1. Unit scale.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Beta(a,b) clamped to the open interval so downstream logs are finite.
  double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta: parameters must be > 0");
    double w;
    if (b == 1.0) {
      w = std::exp(std::log(uniform()) / a);
    } else if (a == 1.0) {
      w = 1.0 - std::exp(std::log(uniform()) / b);
    } else {
      double x = gamma(a);
      double y = gamma(b);
      w = x / (x + y);
    }
    if (w < 1e-300) w = 1e-300;
    if (w > 1.0 - 1e-16) w = 1.0 - 1e-16;
    return w;
  }

  // Inverse gamma with shape/scale parameterization: mean = scale/(shape-1).
  double inv_gamma(double shape, double scale) {
    if (!(scale > 0.0)) throw std::domain_error("inv_gamma: scale must be > 0");
    return scale / gamma(shape);
  }

  // Index into an unnormalized nonnegative weight vector.
  int categorical(std::span<const double> w) {
    double total = 0.0;
    for (double v : w) total += v;
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < w.size(); ++j) {
      acc += w[j];
      if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(w.size()) - 1;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace betagos

#endif  // BETAGOS_RNG_HPP
