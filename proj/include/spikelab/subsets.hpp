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

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spikelab/rational.hpp"

namespace spikelab {

inline void check_subset_args(std::size_t n, std::size_t ell) {
  if (ell == 0 || ell > n) {
    throw std::invalid_argument("subset size ell=" + std::to_string(ell) + " must satisfy 1 <= ell <= n=" +
                                std::to_string(n));
  }
}

/// C(n, k) as uint64; throws if it does not fit.
inline std::uint64_t binomial_u64(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  const BigInt b = binomial(n, k);
  if (!b.fits_ulong_p()) throw std::overflow_error("binomial(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds 64 bits");
  return b.get_ui();
}

/// |{v in {-1,0,1}^n : |v|_0 = ell}| = C(n, ell) * 2^ell.
inline BigInt count_candidates(std::size_t n, std::size_t ell) {
  check_subset_args(n, ell);
  BigInt r = binomial(n, ell);
  r <<= static_cast<mp_bitcnt_t>(ell);
  return r;
}

/// Walks the size-ell subsets of {0, ..., n-1} in colexicographic order,
/// optionally starting from an arbitrary rank. Colex rank of {c_0 < ... < c_{l-1}}
/// is sum_i C(c_i, i + 1).
class ColexSubsets {
 public:
  ColexSubsets(std::size_t n, std::size_t ell, std::uint64_t rank = 0) : n_(n), c_(ell) {
    check_subset_args(n, ell);
    total_ = binomial_u64(n, ell);
    if (rank > total_) throw std::out_of_range("ColexSubsets: rank out of range");
    rank_ = rank;
    if (rank == total_) return;
    // Unrank greedily from the top element down.
    std::uint64_t r = rank;
    std::size_t hi = n;
    for (std::size_t i = ell; i-- > 0;) {
      // Largest c < hi with C(c, i+1) <= r.
      std::size_t lo_c = i, hi_c = hi - 1;
      while (lo_c < hi_c) {
        const std::size_t mid = (lo_c + hi_c + 1) / 2;
        if (binomial_u64(mid, i + 1) <= r) lo_c = mid; else hi_c = mid - 1;
      }
      const std::size_t c = lo_c;
      c_[i] = static_cast<std::uint32_t>(c);
      r -= binomial_u64(c, i + 1);
      hi = c;
    }
  }

  std::size_t n() const { return n_; }
  bool done() const { return rank_ >= total_; }
  std::uint64_t rank() const { return rank_; }
  std::uint64_t total() const { return total_; }
  const std::vector<std::uint32_t>& current() const { return c_; }

  /// Moves to the colex successor. Returns the number of leading positions
  /// whose element changed (positions 0..k-1), or 0 when the walk is exhausted.
  std::size_t advance() {
    ++rank_;
    if (rank_ >= total_) return 0;
    const std::size_t ell = c_.size();
    std::size_t j = 0;
    while (j + 1 < ell && c_[j] + 1 == c_[j + 1]) ++j;
    ++c_[j];
    for (std::size_t i = 0; i < j; ++i) c_[i] = static_cast<std::uint32_t>(i);
    return j + 1;
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> c_;
  std::uint64_t total_ = 0;
  std::uint64_t rank_ = 0;
};

inline std::uint64_t colex_rank(const std::vector<std::uint32_t>& subset) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) r += binomial_u64(subset[i], i + 1);
  return r;
}

/// All size-ell subsets in colex order. Materializes C(n, ell) vectors, so it is
/// meant for small cases; large walks should use ColexSubsets directly.
inline std::vector<std::vector<std::uint32_t>> enumerate_supports(std::size_t n, std::size_t ell) {
  std::vector<std::vector<std::uint32_t>> out;
  for (ColexSubsets it(n, ell); !it.done(); it.advance()) out.push_back(it.current());
  return out;
}

/// Splits [0, total) into `parts` contiguous rank ranges of near-equal size.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> split_ranks(std::uint64_t total, std::size_t parts) {
  if (parts == 0) parts = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  const std::uint64_t base = total / parts;
  const std::uint64_t extra = total % parts;
  std::uint64_t lo = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::uint64_t len = base + (p < extra ? 1 : 0);
    out.emplace_back(lo, lo + len);
    lo += len;
  }
  return out;
}

}  // namespace spikelab
