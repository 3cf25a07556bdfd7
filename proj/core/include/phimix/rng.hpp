#pragma once

#include <cstdint>
#include <random>

namespace phimix {

/// Seedable, splittable pseudo-random generator shared by every sampler.
///
/// A generator is identified by a (seed, stream) pair. `split(i)` derives an
/// independent child stream deterministically, so Monte-Carlo work cut into
/// numbered blocks reproduces bit-for-bit no matter how the blocks are
/// scheduled. Satisfies UniformRandomBitGenerator, so standard library
/// distributions accept it directly.
class Rng {
 public:
  using engine_type = std::mt19937_64;
  using result_type = engine_type::result_type;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  [[nodiscard]] Rng split(std::uint64_t child) const;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  static constexpr result_type min() noexcept { return engine_type::min(); }
  static constexpr result_type max() noexcept { return engine_type::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();

  /// Standard exponential (mean 1) by inversion.
  double exponential();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  engine_type engine_;
};

/// SplitMix64 finalizer; used for stream derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace phimix
