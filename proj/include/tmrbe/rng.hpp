#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tmrbe {

/// Seedable random stream. Independent streams are derived from a root seed
/// plus a stream id, so per-clause draws do not depend on clause order.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// True with probability p. p <= 0 and p >= 1 consume no draw.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  Rng split(std::uint64_t stream) const;

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
};

/// Stable 64-bit id for a textual stream label (FNV-1a).
std::uint64_t stream_id(std::string_view label);

}  // namespace tmrbe
