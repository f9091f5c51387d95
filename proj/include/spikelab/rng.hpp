// Copyright 2026 The spikelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace spikelab {

/// Philox4x32-10 counter-based generator.
///
/// The key is the 64-bit seed, the 128-bit counter is split into a 64-bit
/// block index and a 64-bit stream id. Distinct stream ids under one seed give
/// statistically independent sequences, so parallel trials can each own a
/// stream without coordination. Satisfies UniformRandomBitGenerator.
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 2) {
      refill();
    }
    return buffer_[pos_++];
  }

  std::uint64_t seed() const noexcept {
    return static_cast<std::uint64_t>(key_[0]) |
           (static_cast<std::uint64_t>(key_[1]) << 32);
  }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Skips `blocks` counter blocks (two outputs each) from the current block.
  void discard_blocks(std::uint64_t blocks) noexcept {
    block_ += blocks;
    pos_ = 2;
  }

  /// Child generator on a stream derived from this one's stream and `tag`.
  /// Does not advance this generator.
  Philox split(std::uint64_t tag) const noexcept {
    return Philox(seed(), mix(stream_ ^ mix(tag + 0x632be59bd9b4e019ULL)));
  }

  /// SplitMix64 finalizer; used to hash tuples into stream ids.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  void refill() noexcept {
    std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    buffer_[0] = static_cast<std::uint64_t>(ctr[0]) | (static_cast<std::uint64_t>(ctr[1]) << 32);
    buffer_[1] = static_cast<std::uint64_t>(ctr[2]) | (static_cast<std::uint64_t>(ctr[3]) << 32);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int pos_ = 2;
};

/// Stream id for a tuple of integers, e.g. (cell, trial, purpose).
inline std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t p : parts) {
    h = Philox::mix(h ^ Philox::mix(p));
  }
  return h;
}

}  // namespace spikelab
