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

// Exact low-degree likelihood ratio norms under the sparse Rademacher prior.
//
// Everything is expressed through the scaled overlap moments
//
//   A_d = (n rho)^{2d} E <v1, v2>^{2d}
//       = (2d)! sum_{k=1}^{d} C(n, k) rho^{2k} f(k, d),
//
// where f(k, d) sums prod_i 1/(2 b_i)! over compositions of d into k positive
// parts b_i. Both norms are then finite sums of nonnegative rationals:
//
//   Wigner:  |L^{<=D}|^2 = sum_{d<=D}   (1/d!) (n lambda^2 / 2)^d (n rho)^{-2d} A_d
//   Wishart: |L^{<=D}|^2 = sum_{d<=D/2} c(N, d) (beta^2 / 4)^d   (n rho)^{-2d} A_d
//
// with c(N, d) the degree-d Taylor coefficient of (1 - 4x)^{-N/2}.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spikelab/model.hpp"
#include "spikelab/rational.hpp"

namespace spikelab {

/// f(k, d) for 0 <= k <= d <= D. Independent of n and rho, so one table
/// serves every moment table up to degree D.
class CompositionTable {
 public:
  explicit CompositionTable(std::size_t D) : D_(D), f_((D + 1) * (D + 1)) {
    std::vector<ExactScalar> inv_fact2(D + 2);  // 1/(2b)!
    for (std::size_t b = 0; b <= D + 1; ++b) inv_fact2[b] = ExactScalar(1, factorial(2 * b));
    at(0, 0) = 1;
    for (std::size_t k = 1; k <= D; ++k) {
      for (std::size_t d = k; d <= D; ++d) {
        ExactScalar sum = 0;
        for (std::size_t b = 1; b <= d - k + 1; ++b) {
          if (d - b >= k - 1) sum += get(k - 1, d - b) * inv_fact2[b];
        }
        at(k, d) = sum;
      }
    }
  }

  std::size_t max_degree() const { return D_; }
  const ExactScalar& get(std::size_t k, std::size_t d) const { return f_[k * (D_ + 1) + d]; }

 private:
  ExactScalar& at(std::size_t k, std::size_t d) { return f_[k * (D_ + 1) + d]; }
  std::size_t D_;
  std::vector<ExactScalar> f_;
};

struct MomentTable {
  std::size_t n = 0;
  ExactScalar rho;
  std::shared_ptr<const CompositionTable> compositions;
  /// A_0 .. A_D.
  std::vector<ExactScalar> A;

  std::size_t max_degree() const { return A.empty() ? 0 : A.size() - 1; }
};

inline MomentTable moment_table(std::size_t n, const ExactScalar& rho, std::size_t D,
                                std::shared_ptr<const CompositionTable> table = nullptr) {
  if (n == 0) throw std::invalid_argument("moment_table: n must be positive");
  if (sgn(rho) <= 0 || rho > 1) throw std::invalid_argument("moment_table: rho must lie in (0, 1]");
  if (!table || table->max_degree() < D) table = std::make_shared<CompositionTable>(D);
  MomentTable t;
  t.n = n;
  t.rho = rho;
  t.compositions = table;
  t.A.resize(D + 1);
  t.A[0] = 1;
  const ExactScalar rho2 = rho * rho;
  for (std::size_t d = 1; d <= D; ++d) {
    ExactScalar sum = 0;
    ExactScalar rho2k = 1;
    for (std::size_t k = 1; k <= d; ++k) {
      rho2k *= rho2;
      if (k > n) break;
      sum += ExactScalar(binomial(n, k)) * rho2k * table->get(k, d);
    }
    t.A[d] = sum * ExactScalar(factorial(2 * d));
  }
  return t;
}

/// sum over d_1 + ... + d_N = d of prod C(2 d_i, d_i), via the closed form
/// (2^d / d!) prod_{i<d} (N + 2i).
inline BigInt wishart_coefficient(std::size_t N, std::size_t d) {
  if (N == 0) throw std::invalid_argument("wishart_coefficient: N must be >= 1");
  BigInt num = 1;
  for (std::size_t i = 0; i < d; ++i) num *= BigInt(static_cast<unsigned long>(N + 2 * i));
  num <<= static_cast<mp_bitcnt_t>(d);
  const BigInt den = factorial(d);
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
    throw std::logic_error("wishart_coefficient: closed form is not an integer");
  }
  BigInt q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

struct LdlrReport {
  Model model = Model::kWigner;
  std::size_t n = 0;
  std::size_t N = 0;  // Wishart only
  std::size_t D = 0;
  ExactScalar rho;
  ExactScalar snr;    // lambda (Wigner) or beta (Wishart)
  ExactScalar value_exact;
  double value = 1.0;
  /// Per-degree terms; index d is the contribution of A_d.
  std::vector<ExactScalar> terms;
  /// term(last) / term(last - 1); 0 when there is a single term.
  double last_term_ratio = 0.0;
};

namespace detail {

inline void finish_report(LdlrReport& r) {
  r.value_exact = 0;
  for (const auto& t : r.terms) r.value_exact += t;
  r.value = to_double(r.value_exact);
  const std::size_t m = r.terms.size();
  if (m >= 2 && sgn(r.terms[m - 2]) > 0) {
    r.last_term_ratio = to_double(r.terms[m - 1] / r.terms[m - 2]);
  } else if (m >= 2) {
    r.last_term_ratio = sgn(r.terms[m - 1]) > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
}

}  // namespace detail

inline LdlrReport ldlr_norm_wigner(std::size_t n, const ExactScalar& lambda, const ExactScalar& rho, std::size_t D,
                                   std::shared_ptr<const CompositionTable> table = nullptr) {
  if (sgn(lambda) < 0) throw std::invalid_argument("ldlr_norm_wigner: lambda must be >= 0");
  const MomentTable mt = moment_table(n, rho, D, std::move(table));
  LdlrReport r;
  r.model = Model::kWigner;
  r.n = n;
  r.D = D;
  r.rho = rho;
  r.snr = lambda;
  const ExactScalar nr = rho * static_cast<unsigned long>(n);
  // (n lambda^2 / 2) / (n rho)^2 per degree.
  const ExactScalar step = ExactScalar(lambda * lambda * static_cast<unsigned long>(n) / 2) / (nr * nr);
  ExactScalar scale = 1;
  for (std::size_t d = 0; d <= D; ++d) {
    if (d > 0) scale *= step / static_cast<unsigned long>(d);
    r.terms.push_back(scale * mt.A[d]);
  }
  detail::finish_report(r);
  return r;
}

inline LdlrReport ldlr_norm_wishart(std::size_t n, std::size_t N, const ExactScalar& beta, const ExactScalar& rho,
                                    std::size_t D, std::shared_ptr<const CompositionTable> table = nullptr) {
  if (sgn(beta) < 0) throw std::invalid_argument("ldlr_norm_wishart: beta must be >= 0");
  if (N == 0) throw std::invalid_argument("ldlr_norm_wishart: N must be >= 1");
  const std::size_t top = D / 2;
  const MomentTable mt = moment_table(n, rho, top, std::move(table));
  LdlrReport r;
  r.model = Model::kWishart;
  r.n = n;
  r.N = N;
  r.D = D;
  r.rho = rho;
  r.snr = beta;
  const ExactScalar nr = rho * static_cast<unsigned long>(n);
  const ExactScalar step = ExactScalar(beta * beta / 4) / (nr * nr);
  ExactScalar scale = 1;
  for (std::size_t d = 0; d <= top; ++d) {
    if (d > 0) scale *= step;
    r.terms.push_back(ExactScalar(wishart_coefficient(N, d)) * scale * mt.A[d]);
  }
  detail::finish_report(r);
  return r;
}

// --- bounds on A_d -------------------------------------------------------

/// Balanced multinomial M(k) = (2d)! / ((2w)!^{k-r} (2w+2)!^r) with d = wk + r.
inline BigInt balanced_multinomial(std::size_t d, std::size_t k) {
  const std::size_t w = d / k, r = d % k;
  BigInt den = 1, f1 = factorial(2 * w), f2 = factorial(2 * w + 2);
  for (std::size_t i = 0; i < k - r; ++i) den *= f1;
  for (std::size_t i = 0; i < r; ++i) den *= f2;
  BigInt q;
  mpz_divexact(q.get_mpz_t(), factorial(2 * d).get_mpz_t(), den.get_mpz_t());
  return q;
}

/// G(k) = C(n, k) C(d-1, k-1) rho^{2k} M(k).
inline ExactScalar g_term(std::size_t n, const ExactScalar& rho, std::size_t d, std::size_t k) {
  return ExactScalar(binomial(n, k) * binomial(d - 1, k - 1) * balanced_multinomial(d, k)) * power(rho * rho, k);
}

struct BoundCheck {
  bool hypothesis = false;
  bool asserted = false;  // false: reported only
  bool pass = true;
  double log_bound = std::numeric_limits<double>::quiet_NaN();
  /// log(bound) - log(A_d); positive means the bound holds with room.
  double log_slack = std::numeric_limits<double>::quiet_NaN();
};

struct AdBoundRow {
  std::size_t d = 0;
  double log_Ad = 0.0;
  /// A_d <= sum_k G(k), exact.
  bool g_sum_holds = false;
  double log_g_sum = 0.0;
  BoundCheck first_upper;   // 2d e^{mu d + d^2/n} C(n,d) (2d)!/2^d rho^{2d}
  BoundCheck second_upper;  // sqrt(d) e^{d^2/n} (11e/30)^{d/2} mu^{-2d} G(d), constant taken as 1
  BoundCheck lower;         // sqrt(w) C(n,d)(2d)!/2^d [2 (d/(n e rho^2))^{1-1/w} (w/(2w)!)^{1/w}]^d rho^{2d}
};

struct AdBoundReport {
  std::vector<AdBoundRow> rows;
  /// Every asserted check passed.
  bool pass = true;
};

/// Evaluates the first/second upper bounds and the lower bound on A_d for
/// d = 1..D. The first upper bound is asserted whenever its hypothesis
/// rho >= max(1, sqrt(1/(6 mu))) sqrt(D/n) holds. The second upper bound hides
/// an unspecified constant and the lower bound an unquantified (1 - o(1))
/// factor, so both are reported without asserting. `w` selects the block size
/// of the lower bound (evaluated where w divides d).
inline AdBoundReport check_Ad_bounds(const MomentTable& table, double mu, std::size_t D, std::size_t w = 1) {
  if (D > table.max_degree()) throw std::invalid_argument("check_Ad_bounds: table degree too small");
  if (!(mu > 0)) throw std::invalid_argument("check_Ad_bounds: mu must be positive");
  if (w == 0) throw std::invalid_argument("check_Ad_bounds: w must be positive");
  const double n = static_cast<double>(table.n);
  const double rho = to_double(table.rho);
  const double root_dn = std::sqrt(static_cast<double>(D) / n);
  const bool first_hyp = rho >= std::max(1.0, std::sqrt(1.0 / (6.0 * mu))) * root_dn;
  const bool second_hyp = mu < 1.0 / std::sqrt(3.0) && rho >= mu * root_dn;

  AdBoundReport rep;
  for (std::size_t d = 1; d <= D; ++d) {
    AdBoundRow row;
    row.d = d;
    const ExactScalar& Ad = table.A[d];
    row.log_Ad = log_of(Ad);
    ExactScalar gsum = 0;
    for (std::size_t k = 1; k <= std::min<std::size_t>(d, table.n); ++k) gsum += g_term(table.n, table.rho, d, k);
    row.g_sum_holds = Ad <= gsum;
    row.log_g_sum = log_of(gsum);
    const double dd = static_cast<double>(d);
    const double log_gd = d <= table.n ? log_of(g_term(table.n, table.rho, d, d))
                                       : -std::numeric_limits<double>::infinity();

    // G(d) = C(n,d) (2d)!/2^d rho^{2d}.
    row.first_upper.hypothesis = first_hyp;
    row.first_upper.asserted = first_hyp;
    row.first_upper.log_bound = std::log(2.0 * dd) + mu * dd + dd * dd / n + log_gd;
    row.first_upper.log_slack = row.first_upper.log_bound - row.log_Ad;
    if (first_hyp) {
      row.first_upper.pass = row.g_sum_holds && row.log_g_sum <= row.first_upper.log_bound + 1e-12;
    }

    row.second_upper.hypothesis = second_hyp && d >= 11;
    row.second_upper.log_bound = 0.5 * std::log(dd) + dd * dd / n + 0.5 * dd * std::log(11.0 * std::exp(1.0) / 30.0) -
                                 2.0 * dd * std::log(mu) + log_gd;
    row.second_upper.log_slack = row.second_upper.log_bound - row.log_Ad;
    row.second_upper.pass = row.second_upper.log_slack >= 0;

    row.lower.hypothesis = d % w == 0 && static_cast<double>(d) < n;
    if (row.lower.hypothesis) {
      const double wd = static_cast<double>(w);
      const double log_fact_2w = std::lgamma(2.0 * wd + 1.0);
      const double inner = std::log(2.0) + (1.0 - 1.0 / wd) * std::log(dd / (n * std::exp(1.0) * rho * rho)) +
                           (std::log(wd) - log_fact_2w) / wd;
      row.lower.log_bound = 0.5 * std::log(wd) + log_gd + dd * inner;
      row.lower.log_slack = row.log_Ad - row.lower.log_bound;  // positive: A_d above the lower bound
      row.lower.pass = row.lower.log_slack >= 0;
    }
    if (row.first_upper.asserted && !row.first_upper.pass) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

// --- regime probes --------------------------------------------------------

enum class RegimeVerdict { kBoundedConsistent, kDivergentConsistent, kInconclusive };

inline const char* to_string(RegimeVerdict v) {
  switch (v) {
    case RegimeVerdict::kBoundedConsistent: return "bounded-consistent";
    case RegimeVerdict::kDivergentConsistent: return "divergent-consistent";
    default: return "inconclusive";
  }
}

struct RegimePoint {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t D = 0;
  ExactScalar rho;
  double value = 1.0;
  double last_term_ratio = 0.0;
  LdlrReport report;
};

struct RegimeReport {
  Model model = Model::kWigner;
  ExactScalar snr;
  std::vector<RegimePoint> points;
  RegimeVerdict verdict = RegimeVerdict::kInconclusive;
};

struct RegimeRules {
  std::function<ExactScalar(std::size_t)> rho;
  std::function<std::size_t(std::size_t)> degree;
  /// Wishart sample count N(n); unused for Wigner.
  std::function<std::size_t(std::size_t)> samples;
};

/// Divergent-consistent: each value >= 1.05 x the previous and every last-term
/// ratio >= 1. Bounded-consistent: max/min < 1.05 and every last-term ratio
/// <= 0.9. Anything else is inconclusive.
inline RegimeVerdict classify_regime(const std::vector<double>& values, const std::vector<double>& ratios) {
  if (values.empty()) return RegimeVerdict::kInconclusive;
  bool growing = values.size() >= 2;
  for (std::size_t i = 1; i < values.size(); ++i) growing = growing && values[i] >= 1.05 * values[i - 1];
  const bool ratios_up = std::all_of(ratios.begin(), ratios.end(), [](double r) { return r >= 1.0; });
  if (growing && ratios_up) return RegimeVerdict::kDivergentConsistent;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const bool flat = *hi < 1.05 * *lo;
  const bool ratios_down = std::all_of(ratios.begin(), ratios.end(), [](double r) { return r <= 0.9; });
  if (flat && ratios_down) return RegimeVerdict::kBoundedConsistent;
  return RegimeVerdict::kInconclusive;
}

inline RegimeReport regime_probe(Model model, const ExactScalar& snr, const RegimeRules& rules,
                                 const std::vector<std::size_t>& n_grid) {
  if (!rules.rho || !rules.degree) throw std::invalid_argument("regime_probe: rho and degree rules are required");
  if (model == Model::kWishart && !rules.samples) throw std::invalid_argument("regime_probe: Wishart needs N(n)");
  RegimeReport rep;
  rep.model = model;
  rep.snr = snr;
  std::size_t max_d = 0;
  for (std::size_t n : n_grid) max_d = std::max(max_d, rules.degree(n));
  auto table = std::make_shared<const CompositionTable>(max_d);
  std::vector<double> values, ratios;
  for (std::size_t n : n_grid) {
    RegimePoint p;
    p.n = n;
    p.D = rules.degree(n);
    p.rho = rules.rho(n);
    if (model == Model::kWigner) {
      p.report = ldlr_norm_wigner(n, snr, p.rho, p.D, table);
    } else {
      p.N = rules.samples(n);
      p.report = ldlr_norm_wishart(n, p.N, snr, p.rho, p.D, table);
    }
    p.value = p.report.value;
    p.last_term_ratio = p.report.last_term_ratio;
    values.push_back(p.value);
    ratios.push_back(p.last_term_ratio);
    rep.points.push_back(std::move(p));
  }
  rep.verdict = classify_regime(values, ratios);
  return rep;
}

/// D -> infinity, n -> infinity value of the Wigner norm for lambda < 1:
/// sum_d C(2d, d) (lambda^2/4)^d = 1/sqrt(1 - lambda^2).
inline double wigner_dense_limit(double lambda) {
  return lambda < 1.0 ? 1.0 / std::sqrt(1.0 - lambda * lambda) : std::numeric_limits<double>::infinity();
}

/// Exact rational equal to the binary value of `x` (no rounding).
inline ExactScalar exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("exact_from_double: non-finite value");
  return ExactScalar(x);
}

}  // namespace spikelab
