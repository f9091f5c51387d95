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

// Subexponential-time detection for the spiked Wigner and Wishart models:
// threshold the maximum of v^T Y v over ell-sparse sign vectors. Also holds
// the admissible ranges of ell and the associated failure-probability bounds
// for detection and for support/sign recovery. Logarithms are natural.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "spikelab/model.hpp"
#include "spikelab/search.hpp"

namespace spikelab {

enum class Verdict { kPlanted, kNull };

inline const char* to_string(Verdict v) { return v == Verdict::kPlanted ? "planted" : "null"; }

struct DetectionVerdict {
  Verdict verdict = Verdict::kNull;
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t ell = 0;
  /// Whether ell lies in the interval where the failure bound is proven.
  bool guaranteed = false;
  SearchResult search;
};

/// Admissible ell range [lower, upper]; feasible when it contains an integer >= 1.
struct EllInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool feasible = false;
  std::optional<std::size_t> smallest_feasible_ell;

  bool contains(std::size_t ell) const {
    const double l = static_cast<double>(ell);
    return ell >= 1 && l >= lower && l <= upper;
  }
};

struct FailureBound {
  double value = 0.0;
  bool guaranteed = false;
};

namespace detail {

inline EllInterval make_interval(double lower, double upper) {
  EllInterval iv;
  iv.lower = lower;
  iv.upper = upper;
  if (std::isnan(lower) || std::isnan(upper) || !std::isfinite(lower)) return iv;
  const double first = std::max(1.0, std::ceil(lower));
  if (first <= std::floor(upper)) {
    iv.feasible = true;
    iv.smallest_feasible_ell = static_cast<std::size_t>(first);
  }
  return iv;
}

inline double rho_sq_n_log_n(const SparsityParams& sp) {
  const double n = static_cast<double>(sp.n());
  const double rho = sp.rho_value();
  return rho * rho * n * std::log(n);
}

inline void check_same_n(const SparsityParams& sp, std::size_t n) {
  if (sp.n() != n) throw std::invalid_argument("sparsity params and model disagree on n");
}

inline void check_ell(std::size_t ell, std::size_t n) {
  if (ell == 0 || ell > n) throw std::invalid_argument("ell must satisfy 1 <= ell <= n");
}

}  // namespace detail

// --- thresholds -----------------------------------------------------------

/// ell (1 + beta ell / (2 A^2 rho n)).
inline double wishart_detection_threshold(const SparsityParams& sp, const WishartParams& wp, std::size_t ell) {
  const double l = static_cast<double>(ell);
  const double A2 = sp.A() * sp.A();
  return l * (1.0 + wp.beta * l / (2.0 * A2 * static_cast<double>(sp.support_size())));
}

/// lambda ell^2 / (2 A^2 rho n).
inline double wigner_detection_threshold(const SparsityParams& sp, const WignerParams& wp, std::size_t ell) {
  const double l = static_cast<double>(ell);
  return wp.lambda * l * l / (2.0 * sp.A() * sp.A() * static_cast<double>(sp.support_size()));
}

// --- ell intervals --------------------------------------------------------

/// [25 A^4 gamma / beta^2 * rho^2 n log n, min(1, beta/A^2) A^2/beta * rho n].
inline EllInterval ell_interval_detect(const SparsityParams& sp, const WishartParams& wp) {
  detail::check_same_n(sp, wp.n);
  const double A2 = sp.A() * sp.A();
  const double b = wp.beta;
  if (b <= 0.0) return detail::make_interval(std::numeric_limits<double>::infinity(), 0.0);
  const double lower = 25.0 * A2 * A2 * wp.gamma() / (b * b) * detail::rho_sq_n_log_n(sp);
  const double upper = std::min(1.0, b / A2) * A2 / b * static_cast<double>(sp.support_size());
  return detail::make_interval(lower, upper);
}

/// [36 A^4 / lambda^2 * rho^2 n log n, rho n].
inline EllInterval ell_interval_detect(const SparsityParams& sp, const WignerParams& wp) {
  detail::check_same_n(sp, wp.n);
  const double A2 = sp.A() * sp.A();
  const double lam = wp.lambda;
  const double lower = lam > 0.0 ? 36.0 * A2 * A2 / (lam * lam) * detail::rho_sq_n_log_n(sp)
                                 : std::numeric_limits<double>::infinity();
  return detail::make_interval(lower, static_cast<double>(sp.support_size()));
}

/// [10^4 A^4 gamma / beta^2 * rho^2 n log n, min(1, beta/(25 A^8)) 25 A^8/beta * rho n].
inline EllInterval ell_interval_recover(const SparsityParams& sp, const WishartParams& wp) {
  detail::check_same_n(sp, wp.n);
  const double A4 = std::pow(sp.A(), 4);
  const double A8 = A4 * A4;
  const double b = wp.beta;
  if (b <= 0.0) return detail::make_interval(std::numeric_limits<double>::infinity(), 0.0);
  const double lower = 10000.0 * A4 * wp.gamma() / (b * b) * detail::rho_sq_n_log_n(sp);
  const double upper = std::min(1.0, b / (25.0 * A8)) * 25.0 * A8 / b * static_cast<double>(sp.support_size());
  return detail::make_interval(lower, upper);
}

/// [338 A^4 / lambda^2 * rho^2 n log n, rho n].
inline EllInterval ell_interval_recover(const SparsityParams& sp, const WignerParams& wp) {
  detail::check_same_n(sp, wp.n);
  const double A4 = std::pow(sp.A(), 4);
  const double lam = wp.lambda;
  const double lower = lam > 0.0 ? 338.0 * A4 / (lam * lam) * detail::rho_sq_n_log_n(sp)
                                 : std::numeric_limits<double>::infinity();
  return detail::make_interval(lower, static_cast<double>(sp.support_size()));
}

// --- failure bounds -------------------------------------------------------

/// Type-I + type-II bound 2 exp(-beta^2 ell^2 / (48 A^4 gamma rho^2 n)).
inline FailureBound detection_failure_bound(const SparsityParams& sp, const WishartParams& wp, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("detection_failure_bound: ell must be >= 1");
  const double l = static_cast<double>(ell), rho = sp.rho_value(), n = static_cast<double>(sp.n());
  const double expo = wp.beta * wp.beta * l * l / (48.0 * std::pow(sp.A(), 4) * wp.gamma() * rho * rho * n);
  return {2.0 * std::exp(-expo), ell_interval_detect(sp, wp).contains(ell)};
}

/// Type-I + type-II bound 2 exp(-lambda^2 ell^2 / (32 A^4 rho^2 n)).
inline FailureBound detection_failure_bound(const SparsityParams& sp, const WignerParams& wp, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("detection_failure_bound: ell must be >= 1");
  const double l = static_cast<double>(ell), rho = sp.rho_value(), n = static_cast<double>(sp.n());
  const double expo = wp.lambda * wp.lambda * l * l / (32.0 * std::pow(sp.A(), 4) * rho * rho * n);
  return {2.0 * std::exp(-expo), ell_interval_detect(sp, wp).contains(ell)};
}

/// Support/sign recovery failure bound 6 exp(-beta^2 ell / (6400 A^4 gamma rho^2 n)).
inline FailureBound recovery_failure_bound(const SparsityParams& sp, const WishartParams& wp, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("recovery_failure_bound: ell must be >= 1");
  const double l = static_cast<double>(ell), rho = sp.rho_value(), n = static_cast<double>(sp.n());
  const double expo = wp.beta * wp.beta * l / (6400.0 * std::pow(sp.A(), 4) * wp.gamma() * rho * rho * n);
  return {6.0 * std::exp(-expo), ell_interval_recover(sp, wp).contains(ell)};
}

/// Support/sign recovery failure bound 4 exp(-lambda^2 ell / (288 A^4 rho^2 n)).
inline FailureBound recovery_failure_bound(const SparsityParams& sp, const WignerParams& wp, std::size_t ell) {
  if (ell == 0) throw std::invalid_argument("recovery_failure_bound: ell must be >= 1");
  const double l = static_cast<double>(ell), rho = sp.rho_value(), n = static_cast<double>(sp.n());
  const double expo = wp.lambda * wp.lambda * l / (288.0 * std::pow(sp.A(), 4) * rho * rho * n);
  return {4.0 * std::exp(-expo), ell_interval_recover(sp, wp).contains(ell)};
}

// --- detection ------------------------------------------------------------

inline DetectionVerdict make_verdict(SearchResult search, double threshold, std::size_t ell, bool guaranteed) {
  DetectionVerdict d;
  d.statistic = search.best_value;
  d.threshold = threshold;
  d.verdict = d.statistic >= d.threshold ? Verdict::kPlanted : Verdict::kNull;
  d.ell = ell;
  d.guaranteed = guaranteed;
  d.search = std::move(search);
  return d;
}

/// Max of v^T Y v over I_{n,ell} on the sample covariance, thresholded at
/// ell (1 + beta ell / (2 A^2 rho n)).
inline DetectionVerdict wishart_detect(const WishartInstance& data, const SparsityParams& sp,
                                       const WishartParams& wp, std::size_t ell, SearchOptions opt = {}) {
  wp.validate();
  detail::check_same_n(sp, data.n());
  detail::check_same_n(sp, wp.n);
  detail::check_ell(ell, data.n());
  return make_verdict(max_quadratic_form(data.covariance(), ell, opt), wishart_detection_threshold(sp, wp, ell), ell,
                      ell_interval_detect(sp, wp).contains(ell));
}

/// Max of v^T Y v over I_{n,ell}, thresholded at lambda ell^2 / (2 A^2 rho n).
inline DetectionVerdict wigner_detect(const WignerInstance& data, const SparsityParams& sp, const WignerParams& wp,
                                      std::size_t ell, SearchOptions opt = {}) {
  wp.validate();
  detail::check_same_n(sp, data.n());
  detail::check_same_n(sp, wp.n);
  detail::check_ell(ell, data.n());
  return make_verdict(max_quadratic_form(data.Y, ell, opt), wigner_detection_threshold(sp, wp, ell), ell,
                      ell_interval_detect(sp, wp).contains(ell));
}

}  // namespace spikelab
