#pragma once

#include <array>
#include <cstdint>

namespace cgc {

namespace detail {

// One Philox 4x64 block (10 rounds): four 64-bit outputs for the given
// counter and key. Exposed for known-answer tests.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

}  // namespace detail

// Counter-based stream RNG (Philox 4x64, 10 rounds). A stream is identified
// by (seed, stream_id): equal identifiers reproduce the same draw sequence
// in any process, thread layout, or platform; distinct stream_ids give
// statistically independent streams under the same seed. Cheap to construct,
// so fan-out patterns (one stream per replicate) are the norm.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream_id() const { return key_[1]; }

  // A fresh, independent stream under the same seed.
  RngStream substream(std::uint64_t stream_id) const { return RngStream(key_[0], stream_id); }

  // Raw 64 uniform random bits.
  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Uniform on (0, 1); never returns an endpoint.
  double uniform_open();

  // Uniform integer in [0, bound); bound must be positive. Unbiased
  // (rejection sampling), consumes a deterministic stream prefix.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via the inverse CDF: exactly one uniform per draw.
  double normal();

  // Exponential with the given rate (mean 1/rate); rate must be positive.
  double exponential(double rate);

private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> block_{0, 0, 0, 0};
  int index_ = 4;  // next unread word in block_; 4 means exhausted
};

}  // namespace cgc
