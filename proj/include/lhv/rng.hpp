#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace lhv {

/// Philox4x32-10 counter-based generator.
///
/// State is a 128-bit counter plus a 64-bit key. A stream is identified by
/// (key, stream id): the stream id occupies the upper 64 bits of the counter
/// and the block index the lower 64 bits, so independent streams never
/// overlap and any position can be reached in O(1). Output is a pure function
/// of (key, counter), hence identical on every platform.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream_id);

  /// Raw bijection: ten Philox rounds of `counter` under `key`.
  static Block encrypt(Block counter, Key key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double on [0, 1) built from the top 53 bits of one draw.
  double uniform01();

  /// Uniform integer in [0, range) via 64x64->128 multiply-high.
  std::uint64_t below(std::uint64_t range);

  /// Jump to an absolute position (in 64-bit outputs) within the stream.
  void seek(std::uint64_t position);

 private:
  void refill();

  Key key_{};
  std::uint64_t stream_id_ = 0;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int cursor_ = 2;  // number of 64-bit words already consumed from buffer_
};

}  // namespace lhv
