#pragma once

#include <cstdint>
#include <random>

namespace levyshrink {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for stream `stream` of a run seeded with `seed`.  Streams are what
/// makes block-parallel sampling reproducible: block b always draws from
/// stream b regardless of which thread runs it.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
  static Rng stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential();
  /// Gamma(shape, scale).
  double gamma(double shape, double scale = 1.0);
  /// Inverse-gamma with density proportional to x^{-shape-1} exp(-scale / x).
  double inv_gamma(double shape, double scale);
  std::int64_t poisson(double mean);
  double beta(double a, double b);

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace levyshrink
