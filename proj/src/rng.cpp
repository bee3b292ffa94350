#include "cgc/rng.hpp"

#include <cmath>

#include "cgc/errors.hpp"
#include "cgc/normal.hpp"

namespace cgc {

namespace detail {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(prod >> 64);
  return static_cast<std::uint64_t>(prod);
}

inline void round_once(std::array<std::uint64_t, 4>& ctr, const std::array<std::uint64_t, 2>& key) {
  std::uint64_t hi0, hi1;
  const std::uint64_t lo0 = mulhilo(kMul0, ctr[0], &hi0);
  const std::uint64_t lo1 = mulhilo(kMul1, ctr[2], &hi1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> state = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    round_once(state, k);
  }
  return state;
}

}  // namespace detail

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : key_{seed, stream_id} {}

std::uint64_t RngStream::next_u64() {
  if (index_ == 4) {
    // 256-bit pre-increment (the first block uses counter 1); in practice
    // only the low word ever moves.
    for (int w = 0; w < 4; ++w)
      if (++counter_[w] != 0) break;
    block_ = detail::philox4x64(counter_, key_);
    index_ = 0;
  }
  return block_[index_++];
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw DataError("RngStream::below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double RngStream::normal() { return normal_quantile(uniform_open()); }

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw DataError("RngStream::exponential: rate must be positive");
  return -std::log1p(-uniform()) / rate;
}

}  // namespace cgc
