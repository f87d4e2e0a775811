#pragma once

#include <cstdint>
#include <initializer_list>
#include <tuple>
#include <utility>

namespace pgeo {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Small deterministic generator whose state is derived from a key such as
// (seed, layer, iteration). Streams for different keys are independent of
// evaluation order, which keeps parallel runs bit-identical to serial ones.
// Bounded and real draws are implemented here rather than through <random>
// distributions so the output is identical across standard libraries.
class StreamRng {
 public:
  StreamRng(std::initializer_list<std::uint64_t> key) noexcept {
    std::uint64_t s = 0x6a09e667f3bcc909ULL;
    for (auto k : key) s = mix64(s ^ mix64(k));
    state_ = s;
  }

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound), Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound) noexcept {
    auto [high, low] = wide_multiply(next(), bound);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) std::tie(high, low) = wide_multiply(next(), bound);
    }
    return high;
  }

  // Uniform double in [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  // Full 128-bit product as (high, low) 64-bit halves.
  static std::pair<std::uint64_t, std::uint64_t> wide_multiply(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t a_lo = a & 0xffffffffULL, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xffffffffULL, b_hi = b >> 32;
    const std::uint64_t ll = a_lo * b_lo;
    const std::uint64_t lh = a_lo * b_hi;
    const std::uint64_t hl = a_hi * b_lo;
    const std::uint64_t hh = a_hi * b_hi;
    const std::uint64_t mid = (ll >> 32) + (lh & 0xffffffffULL) + (hl & 0xffffffffULL);
    const std::uint64_t high = hh + (lh >> 32) + (hl >> 32) + (mid >> 32);
    const std::uint64_t low = (mid << 32) | (ll & 0xffffffffULL);
    return {high, low};
  }

  std::uint64_t state_;
};

}  // namespace pgeo
