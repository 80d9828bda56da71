#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace xroads {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Maps a 128-bit counter and 64-bit key to 128
/// pseudo-random bits.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Sequential view of one counter-based substream identified by
/// (seed, trial, stream). The counter layout is
/// {block index, stream id, trial low word, trial high word}, so substreams
/// never overlap and any trial can be regenerated in isolation.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint32_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream),
        trial_lo_(static_cast<std::uint32_t>(trial)),
        trial_hi_(static_cast<std::uint32_t>(trial >> 32)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-mean exponential variate.
  double exponential() noexcept { return -std::log(uniform_open()); }

  bool coin() noexcept { return ((*this)() & 1u) != 0; }

 private:
  void refill() noexcept {
    buffer_ = Philox4x32::block({block_++, stream_, trial_lo_, trial_hi_}, key_);
    used_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint32_t trial_lo_;
  std::uint32_t trial_hi_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Per-trial substream factory.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial) noexcept : seed_(seed), trial_(trial) {}

  CounterRng stream(std::uint32_t id) const noexcept { return {seed_, trial_, id}; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t trial() const noexcept { return trial_; }

 private:
  std::uint64_t seed_;
  std::uint64_t trial_;
};

}  // namespace xroads
