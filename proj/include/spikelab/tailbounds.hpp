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

// Chernoff-type tail bounds for Gaussian inner products and chi-squared
// variables, plus Monte Carlo estimators of the matching tail events.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "spikelab/rng.hpp"

namespace spikelab {

struct TailBoundResult {
  double bound_value = 1.0;
  /// Whether the parameters lie in the range where the bound is proven.
  bool regime_ok = false;
};

/// P(|<u, u'>| >= t) <= 2 exp(-t^2 / (4N)) for independent u, u' ~ N(0, I_N);
/// proven for 0 < t <= N/2.
inline TailBoundResult gaussian_inner_tail(std::size_t N, double t) {
  if (N == 0) throw std::invalid_argument("gaussian_inner_tail: N must be >= 1");
  const double n = static_cast<double>(N);
  return {2.0 * std::exp(-t * t / (4.0 * n)), t > 0.0 && t <= n / 2.0};
}

/// exp(k (1 - z + log z) / 2): bounds P(chi2_k <= z k) for z < 1 and
/// P(chi2_k >= z k) for z > 1. At z = 1 the bound is trivially 1.
inline TailBoundResult chi2_tail_bound(std::size_t k, double z) {
  if (k == 0) throw std::invalid_argument("chi2_tail_bound: k must be >= 1");
  if (!(z > 0.0)) throw std::invalid_argument("chi2_tail_bound: z must be positive");
  const double expo = 0.5 * static_cast<double>(k) * (1.0 - z + std::log(z));
  return {std::exp(expo), z != 1.0};
}

/// Claimed P(|chi2_k - k| >= t k) <= exp(-k t^2 / 3) for 0 < t <= 1/2. The
/// one-sided bounds only give 2 exp(-k t^2 / 6), and the claim fails at
/// k = 100, t = 1/2; the value is returned as stated.
inline TailBoundResult chi2_two_sided_bound(std::size_t k, double t) {
  if (k == 0) throw std::invalid_argument("chi2_two_sided_bound: k must be >= 1");
  return {std::exp(-static_cast<double>(k) * t * t / 3.0), t > 0.0 && t <= 0.5};
}

// --- Monte Carlo ---------------------------------------------------------

struct TailEstimate {
  std::size_t hits = 0;
  std::size_t draws = 0;

  double rate() const { return draws == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(draws); }
  /// Binomial standard error sqrt(p (1 - p) / draws).
  double std_error() const {
    const double p = rate();
    return draws == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  }
};

/// Sum of k squared standard normals.
inline double sample_chi2(std::size_t k, Philox& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double x = g(rng);
    s += x * x;
  }
  return s;
}

/// Fraction of independent pairs with |<u, u'>| >= t.
inline TailEstimate mc_gaussian_inner(std::size_t N, double t, std::size_t draws, std::uint64_t seed) {
  Philox rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  TailEstimate e{0, draws};
  for (std::size_t i = 0; i < draws; ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < N; ++j) dot += g(rng) * g(rng);
    if (std::abs(dot) >= t) ++e.hits;
  }
  return e;
}

/// Fraction of draws with chi2_k >= z k (z > 1) or chi2_k <= z k (z < 1).
inline TailEstimate mc_chi2_tail(std::size_t k, double z, std::size_t draws, std::uint64_t seed) {
  Philox rng(seed);
  const double cut = z * static_cast<double>(k);
  TailEstimate e{0, draws};
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = sample_chi2(k, rng);
    if (z > 1.0 ? x >= cut : x <= cut) ++e.hits;
  }
  return e;
}

/// Upper and lower one-sided deviation frequencies P(chi2_k - k >= t k) and
/// P(chi2_k - k <= -t k), estimated from the same draws.
struct TwoSidedEstimate {
  TailEstimate upper;
  TailEstimate lower;
};

inline TwoSidedEstimate mc_chi2_two_sided(std::size_t k, double t, std::size_t draws, std::uint64_t seed) {
  Philox rng(seed);
  const double kk = static_cast<double>(k);
  TwoSidedEstimate e{{0, draws}, {0, draws}};
  for (std::size_t i = 0; i < draws; ++i) {
    const double dev = sample_chi2(k, rng) - kk;
    if (dev >= t * kk) ++e.upper.hits;
    if (dev <= -t * kk) ++e.lower.hits;
  }
  return e;
}

}  // namespace spikelab
