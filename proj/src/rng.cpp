#include "lhv/rng.hpp"

namespace lhv {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream_id)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_id_(stream_id) {}

void Philox4x32::refill() {
  const Block ctr = {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(stream_id_),
                     static_cast<std::uint32_t>(stream_id_ >> 32)};
  buffer_ = encrypt(ctr, key_);
  ++block_;
  cursor_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (cursor_ == 2) refill();
  const int i = 2 * cursor_++;
  return (static_cast<std::uint64_t>(buffer_[i + 1]) << 32) | buffer_[i];
}

double Philox4x32::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t Philox4x32::below(std::uint64_t range) {
  __extension__ using u128 = unsigned __int128;
  const u128 p = static_cast<u128>((*this)()) * range;
  return static_cast<std::uint64_t>(p >> 64);
}

void Philox4x32::seek(std::uint64_t position) {
  block_ = position / 2;
  refill();
  cursor_ = static_cast<int>(position % 2);
}

}  // namespace lhv
