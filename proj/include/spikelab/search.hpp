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

// Exhaustive maximization of v^T Y v over v in {-1, 0, +1}^n with |v|_0 = ell.
//
// Supports are walked in colex order and split into contiguous rank ranges,
// one per worker. Within a support the first sign is pinned to +1 (v and -v
// give the same value) and the remaining 2^(ell-1) patterns are visited in
// reflected Gray-code order, so each step flips one coordinate and updates the
// value in O(ell) from the running product r = Y_S v. Incremental values are
// only used to screen candidates: anything within a small tolerance of the
// incumbent is re-evaluated from scratch, and the winner is always stored with
// its freshly evaluated value. The reported argmax is therefore the maximum of
// the fresh values under the total order
//
//   larger value  >  smaller colex rank of support  >  lexicographically
//   smaller sign vector (with -1 < +1),
//
// which makes the result independent of the number of workers.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spikelab/model.hpp"
#include "spikelab/subsets.hpp"

namespace spikelab {

/// Element of I_{n,ell}: sorted support plus one sign per support index.
struct CandidateVector {
  std::vector<std::size_t> support;
  std::vector<int> signs;

  std::size_t size() const { return support.size(); }

  bool is_canonical() const {
    if (support.size() != signs.size() || support.empty() || signs.front() != 1) return false;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] != 1 && signs[i] != -1) return false;
      if (i > 0 && support[i] <= support[i - 1]) return false;
    }
    return true;
  }

  Eigen::VectorXd dense(std::size_t n) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] >= n) throw std::out_of_range("CandidateVector: index outside dimension");
      v[static_cast<Eigen::Index>(support[i])] = signs[i];
    }
    return v;
  }

  friend bool operator==(const CandidateVector&, const CandidateVector&) = default;
};

/// v^T Y v, summed over (i, j) in row-major order of the support.
inline double quadratic_form(const SymmetricMatrix& Y, const CandidateVector& v) {
  double acc = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = 0; b < v.size(); ++b) {
      acc += static_cast<double>(v.signs[a] * v.signs[b]) * Y(v.support[a], v.support[b]);
    }
  }
  return acc;
}

struct SearchResult {
  double best_value = -std::numeric_limits<double>::infinity();
  CandidateVector best_vector;
  std::uint64_t candidates_evaluated = 0;
};

struct SearchOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 1;
  /// Skip supports whose bound sum |Y_S| cannot reach the incumbent. Never
  /// changes the result, only candidates_evaluated.
  bool prune = false;
  /// Gray-code steps between exact recomputations of the running product.
  std::uint64_t reanchor_interval = 4096;
};

namespace detail {

/// Lexicographic order on sign patterns stored as masks (bit a set means
/// sign -1 at support position a).
inline bool sign_mask_less(std::uint64_t a, std::uint64_t b) {
  if (a == b) return false;
  const int first = std::countr_zero(a ^ b);
  return (a >> first) & 1U;
}

/// Incremental Gray-code walk over the 2^(ell-1) canonical sign patterns of a
/// dense ell x ell symmetric block (row-major). `base_rowsum` must hold the
/// row sums of the block (the product with the all-ones vector). Calls
/// visit(value, mask) once per pattern.
class GrayWalker {
 public:
  explicit GrayWalker(std::size_t ell, std::uint64_t reanchor_interval)
      : ell_(ell), reanchor_(std::max<std::uint64_t>(1, reanchor_interval)), v_(ell), r_(ell) {}

  template <class Visit>
  void walk(const double* block, const double* base_rowsum, Visit&& visit) {
    const std::size_t l = ell_;
    double q = 0.0;
    for (std::size_t a = 0; a < l; ++a) {
      v_[a] = 1.0;
      r_[a] = base_rowsum[a];
      q += base_rowsum[a];
    }
    std::uint64_t mask = 0;
    visit(q, mask);
    const std::uint64_t patterns = std::uint64_t{1} << (l - 1);
    for (std::uint64_t t = 1; t < patterns; ++t) {
      const std::size_t p = static_cast<std::size_t>(std::countr_zero(t)) + 1;
      const double old = v_[p];
      const double* col = block + p * l;  // symmetric: row p == column p
      q -= 4.0 * old * (r_[p] - col[p] * old);
      const double two_old = 2.0 * old;
      for (std::size_t a = 0; a < l; ++a) r_[a] -= two_old * col[a];
      v_[p] = -old;
      mask ^= std::uint64_t{1} << p;
      if (++steps_ % reanchor_ == 0) q = reanchor(block);
      visit(q, mask);
    }
  }

 private:
  double reanchor(const double* block) {
    double q = 0.0;
    for (std::size_t a = 0; a < ell_; ++a) {
      double s = 0.0;
      for (std::size_t b = 0; b < ell_; ++b) s += block[a * ell_ + b] * v_[b];
      r_[a] = s;
      q += v_[a] * s;
    }
    return q;
  }

  std::size_t ell_;
  std::uint64_t reanchor_;
  std::uint64_t steps_ = 0;
  std::vector<double> v_;
  std::vector<double> r_;
};

struct WorkerBest {
  bool found = false;
  double value = -std::numeric_limits<double>::infinity();
  std::uint64_t rank = 0;
  std::vector<std::uint32_t> support;
  std::uint64_t mask = 0;
  std::uint64_t evaluated = 0;

  bool better_than(const WorkerBest& o) const {
    if (!found) return false;
    if (!o.found) return true;
    if (value != o.value) return value > o.value;
    if (rank != o.rank) return rank < o.rank;
    return sign_mask_less(mask, o.mask);
  }
};

inline double fresh_value(const SymmetricMatrix& Y, const std::vector<std::uint32_t>& s, std::uint64_t mask) {
  double acc = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    const int sa = ((mask >> a) & 1U) ? -1 : 1;
    for (std::size_t b = 0; b < s.size(); ++b) {
      const int sb = ((mask >> b) & 1U) ? -1 : 1;
      acc += static_cast<double>(sa * sb) * Y(s[a], s[b]);
    }
  }
  return acc;
}

inline WorkerBest search_rank_range(const SymmetricMatrix& Y, std::size_t ell, std::uint64_t lo,
                                    std::uint64_t hi, const SearchOptions& opt, double tol) {
  WorkerBest best;
  if (lo >= hi) return best;
  const std::size_t l = ell;
  ColexSubsets it(Y.n(), ell, lo);
  std::vector<double> block(l * l), rowsum(l), abs_rowsum(l);
  const Eigen::MatrixXd& m = Y.matrix();

  auto fill_rows = [&](std::size_t changed) {
    const auto& s = it.current();
    for (std::size_t c = 0; c < changed; ++c) {
      for (std::size_t a = 0; a < l; ++a) {
        const double new_val = m(static_cast<Eigen::Index>(s[a]), static_cast<Eigen::Index>(s[c]));
        if (a >= changed) {
          // Only rows outside the changed prefix keep a running sum.
          rowsum[a] += new_val - block[a * l + c];
          abs_rowsum[a] += std::abs(new_val) - std::abs(block[a * l + c]);
        }
        block[a * l + c] = new_val;
        block[c * l + a] = new_val;
      }
    }
    for (std::size_t c = 0; c < changed; ++c) {
      double sum = 0.0, abs_sum = 0.0;
      for (std::size_t a = 0; a < l; ++a) {
        sum += block[c * l + a];
        abs_sum += std::abs(block[c * l + a]);
      }
      rowsum[c] = sum;
      abs_rowsum[c] = abs_sum;
    }
  };

  std::fill(block.begin(), block.end(), 0.0);
  std::fill(rowsum.begin(), rowsum.end(), 0.0);
  std::fill(abs_rowsum.begin(), abs_rowsum.end(), 0.0);
  fill_rows(l);

  GrayWalker walker(l, opt.reanchor_interval);
  std::uint64_t transitions = 0;
  while (!it.done() && it.rank() < hi) {
    bool skip = false;
    if (opt.prune && best.found) {
      double bound = 0.0;
      for (double v : abs_rowsum) bound += v;
      skip = bound < best.value - tol;
    }
    if (!skip) {
      const std::uint64_t rank = it.rank();
      walker.walk(block.data(), rowsum.data(), [&](double q, std::uint64_t mask) {
        ++best.evaluated;
        if (best.found && q < best.value - tol) return;
        WorkerBest cand;
        cand.found = true;
        cand.rank = rank;
        cand.mask = mask;
        cand.value = fresh_value(Y, it.current(), mask);
        if (cand.better_than(best)) {
          cand.support = it.current();
          cand.evaluated = best.evaluated;
          best = std::move(cand);
        }
      });
    }
    const std::size_t changed = it.advance();
    if (changed == 0) break;
    if (++transitions % opt.reanchor_interval == 0) {
      fill_rows(l);  // drop accumulated rounding in the running row sums
    } else {
      fill_rows(changed);
    }
  }
  return best;
}

}  // namespace detail

/// max over I_{n,ell} of v^T Y v with a canonical, deterministic argmax.
inline SearchResult max_quadratic_form(const SymmetricMatrix& Y, std::size_t ell, SearchOptions opt = {}) {
  const std::size_t n = Y.n();
  check_subset_args(n, ell);
  if (ell > 63) throw std::invalid_argument("max_quadratic_form: ell > 63 is not supported");
  const std::uint64_t supports = binomial_u64(n, ell);

  double max_abs = Y.matrix().cwiseAbs().maxCoeff();
  if (!std::isfinite(max_abs)) throw std::invalid_argument("max_quadratic_form: non-finite matrix entry");
  const double tol = 1e-9 * static_cast<double>(ell * ell) * max_abs + std::numeric_limits<double>::min();

  unsigned threads = opt.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : opt.threads;
  if (static_cast<std::uint64_t>(threads) > supports) threads = static_cast<unsigned>(supports);
  const auto ranges = split_ranks(supports, threads);

  std::vector<detail::WorkerBest> partial(ranges.size());
  if (ranges.size() == 1) {
    partial[0] = detail::search_rank_range(Y, ell, ranges[0].first, ranges[0].second, opt, tol);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(ranges.size());
    for (std::size_t w = 0; w < ranges.size(); ++w) {
      pool.emplace_back([&, w] {
        partial[w] = detail::search_rank_range(Y, ell, ranges[w].first, ranges[w].second, opt, tol);
      });
    }
  }

  detail::WorkerBest best;
  std::uint64_t evaluated = 0;
  for (auto& p : partial) {
    evaluated += p.evaluated;
    if (p.better_than(best)) best = p;
  }

  SearchResult result;
  result.candidates_evaluated = evaluated;
  result.best_value = best.value;
  for (std::size_t a = 0; a < ell; ++a) {
    result.best_vector.support.push_back(best.support[a]);
    result.best_vector.signs.push_back(((best.mask >> a) & 1U) ? -1 : 1);
  }
  const double recheck = quadratic_form(Y, result.best_vector);
  if (std::abs(recheck - result.best_value) > 1e-9 * std::max(1.0, std::abs(recheck))) {
    throw std::logic_error("max_quadratic_form: stored value disagrees with its argmax");
  }
  return result;
}

}  // namespace spikelab
