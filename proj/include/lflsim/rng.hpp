// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Counter-based Philox4x32-10 generator. Streams are addressed by
// (seed, stream id), so Monte-Carlo trials can draw from independent
// substreams in any order and still reproduce bit-identically.
#pragma once

#include <array>
#include <cstdint>

namespace lflsim::rng {

// One keyed block of the Philox4x32-10 function: 128-bit counter in,
// 128 random bits out.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01();

  // Exponential with the given mean, via inverse CDF on (0, 1].
  double exponential(double mean);

  std::uint64_t next_u64();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_ = 0;  // remaining u32 pairs in buffer_ (0 or 1 u64s)
};

}  // namespace lflsim::rng
