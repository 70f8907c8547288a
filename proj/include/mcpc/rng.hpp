#pragma once

#include <cstdint>
#include <string_view>

namespace mcpc {

/// SplitMix64 (Steele, Lea & Flood). A 64-bit counter-based generator whose
/// output depends only on (seed, draw count); substreams come from hashing
/// (seed, stream index), so results do not depend on thread scheduling.
class SplitMix64 {
 public:
  static constexpr std::string_view kName = "splitmix64-v1";

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  /// Independent stream for work item `index` under master `seed`.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix(seed ^ mix(index + kGolden)));
  }

  std::uint64_t next() noexcept { return mix(state_ += kGolden); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(1) variate by inversion.
  double exponential() noexcept;

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace mcpc
