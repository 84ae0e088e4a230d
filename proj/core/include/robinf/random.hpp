#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace robinf {

/// Philox4x32-10 counter-based bijection (Salmon et al., SC'11).
///
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits. Any
/// counter can be evaluated independently, which is what makes per-case
/// streams order-independent.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr int kRounds = 10;

  static Counter block(Counter counter, Key key) noexcept;
};

/// A random stream addressed by (key, stream words). Word 0 of the counter
/// is the block index within the stream; words 1..3 identify the stream.
///
/// Satisfies UniformRandomBitGenerator, so it can drive <random>
/// distributions as well as the helpers below.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t key, std::uint32_t stream0, std::uint32_t stream1 = 0,
               std::uint32_t stream2 = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  void refill() noexcept;

  Philox4x32::Key key_;
  Philox4x32::Counter counter_;
  Philox4x32::Counter buffer_{};
  int next_word_ = 4;
  std::uint64_t draws_ = 0;
};

}  // namespace robinf
