#pragma once

#include <cstdint>

namespace nss {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel scheduling can never reorder the
/// random numbers a computation sees.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t bits(std::uint64_t counter) const noexcept {
    return mix(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1).
  constexpr double uniform(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [-1, 1).
  constexpr double symmetric(std::uint64_t counter) const noexcept {
    return 2.0 * uniform(counter) - 1.0;
  }

  /// Derive an independent child stream.
  constexpr CounterRng split(std::uint64_t child) const noexcept {
    CounterRng r{0, 0};
    r.key_ = mix(key_ ^ mix(child + 0xd1b54a32d192ed03ULL));
    return r;
  }

 private:
  // SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace nss
