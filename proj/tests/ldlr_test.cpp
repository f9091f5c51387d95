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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spikelab/harness/config.hpp"
#include "spikelab/ldlr.hpp"

namespace spikelab {
namespace {

using namespace oracle;

TEST(MomentTable, FirstTwoMomentsClosedForm) {
  const std::vector<std::pair<std::size_t, ExactScalar>> pts{
      {3, ExactScalar(1)}, {5, ExactScalar(1, 5)}, {10, ExactScalar(3, 10)}, {64, ExactScalar(1, 4)},
      {1000, ExactScalar(7, 1000)}};
  for (const auto& [n, rho] : pts) {
    const MomentTable t = moment_table(n, rho, 2);
    const ExactScalar nn(static_cast<unsigned long>(n));
    const ExactScalar r2 = rho * rho;
    EXPECT_EQ(t.A[0], 1);
    EXPECT_EQ(t.A[1], nn * r2);
    EXPECT_EQ(t.A[2], nn * r2 + 3 * nn * (nn - 1) * r2 * r2);
  }
  EXPECT_EQ(moment_table(3, ExactScalar(1), 2).A[2], 21);
}

TEST(MomentTable, MatchesExhaustiveEnumeration) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const ExactScalar& rho : {ExactScalar(1, 2), ExactScalar(1), ExactScalar(1, 3)}) {
      const MomentTable t = moment_table(n, rho, 3);
      for (std::size_t d = 0; d <= 3; ++d) ASSERT_EQ(t.A[d], brute_Ad(n, rho, d)) << n << " " << rho << " " << d;
    }
  }
}

TEST(MomentTable, MatchesConvolutionOracle) {
  for (std::size_t n : {7u, 20u, 45u}) {
    for (const ExactScalar& rho : {ExactScalar(1, 5), ExactScalar(2, 3)}) {
      const MomentTable t = moment_table(n, rho, 12);
      for (std::size_t d = 0; d <= 12; ++d) ASSERT_EQ(t.A[d], convolution_Ad(n, rho, d)) << n << " " << d;
    }
  }
}

TEST(MomentTable, SharedCompositionTableGivesSameValues) {
  auto shared = std::make_shared<const CompositionTable>(15);
  const MomentTable a = moment_table(33, ExactScalar(2, 11), 9, shared);
  const MomentTable b = moment_table(33, ExactScalar(2, 11), 9);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.compositions, shared);
}

TEST(MomentTable, CompositionTableEntries) {
  const CompositionTable f(4);
  EXPECT_EQ(f.get(0, 0), 1);
  EXPECT_EQ(f.get(1, 1), ExactScalar(1, 2));
  EXPECT_EQ(f.get(1, 3), ExactScalar(1, 720));
  EXPECT_EQ(f.get(2, 2), ExactScalar(1, 4));
  EXPECT_EQ(f.get(2, 3), ExactScalar(1, 24));
  EXPECT_EQ(f.get(0, 3), 0);
}

TEST(MomentTable, RejectsBadInputs) {
  EXPECT_THROW(moment_table(0, ExactScalar(1, 2), 3), std::invalid_argument);
  EXPECT_THROW(moment_table(4, ExactScalar(0), 3), std::invalid_argument);
  EXPECT_THROW(moment_table(4, ExactScalar(3, 2), 3), std::invalid_argument);
}

TEST(WishartCoefficient, Examples) {
  for (std::size_t N = 1; N < 30; ++N) {
    EXPECT_EQ(wishart_coefficient(N, 0), 1);
    EXPECT_EQ(wishart_coefficient(N, 1), 2 * static_cast<long>(N));
  }
  EXPECT_EQ(wishart_coefficient(2, 2), 16);
  EXPECT_THROW(wishart_coefficient(0, 2), std::invalid_argument);
}

TEST(WishartCoefficient, MatchesCompositionSum) {
  for (std::size_t N = 1; N <= 8; ++N) {
    for (std::size_t d = 0; d <= 6; ++d) ASSERT_EQ(wishart_coefficient(N, d), brute_coefficient(N, d)) << N << " " << d;
  }
}

TEST(WishartCoefficient, Sandwich) {
  for (std::size_t N = 1; N <= 50; ++N) {
    for (std::size_t d = 0; d <= 12; ++d) {
      const BigInt c = wishart_coefficient(N, d);
      BigInt two_n_pow;
      mpz_ui_pow_ui(two_n_pow.get_mpz_t(), 2 * N, d);
      const ExactScalar base(two_n_pow, factorial(d));
      ASSERT_LE(base, ExactScalar(c)) << N << " " << d;
      if (d == 0) continue;
      const double dd = static_cast<double>(d);
      const double log_upper = std::log(4.0) + 1.5 * std::log(dd) + 4.0 * dd * dd / static_cast<double>(N) + log_of(base);
      ASSERT_LE(log_of(ExactScalar(c)), log_upper) << N << " " << d;
    }
  }
}

TEST(WignerNorm, LowDegreeValues) {
  const ExactScalar lam(3, 2);
  EXPECT_EQ(ldlr_norm_wigner(50, lam, ExactScalar(1, 5), 0).value_exact, 1);
  for (const ExactScalar& rho : {ExactScalar(1, 5), ExactScalar(1, 2), ExactScalar(1)}) {
    const LdlrReport r = ldlr_norm_wigner(50, lam, rho, 1);
    EXPECT_EQ(r.value_exact, 1 + lam * lam / 2);
    EXPECT_EQ(r.terms[1], lam * lam / 2);
  }
}

TEST(WignerNorm, MatchesTermFormula) {
  const std::size_t n = 24;
  const ExactScalar lam(4, 5), rho(1, 4);
  const MomentTable t = moment_table(n, rho, 7);
  const LdlrReport r = ldlr_norm_wigner(n, lam, rho, 7);
  ExactScalar expect = 0;
  const ExactScalar nr = rho * 24;
  for (std::size_t d = 0; d <= 7; ++d) {
    const ExactScalar term = power(lam * lam * 12, d) / ExactScalar(factorial(d)) / power(nr, 2 * d) * t.A[d];
    EXPECT_EQ(r.terms[d], term);
    expect += term;
  }
  EXPECT_EQ(r.value_exact, expect);
  EXPECT_EQ(r.value, to_double(expect));
  EXPECT_DOUBLE_EQ(r.last_term_ratio, to_double(r.terms[7] / r.terms[6]));
}

TEST(WishartNorm, LowDegreeValues) {
  const std::size_t n = 40, N = 160;
  const ExactScalar beta(1, 2);
  for (std::size_t D : {0u, 1u}) {
    const LdlrReport r = ldlr_norm_wishart(n, N, beta, ExactScalar(1, 4), D);
    EXPECT_EQ(r.value_exact, 1);
    EXPECT_EQ(r.last_term_ratio, 0.0);
  }
  for (std::size_t D : {2u, 3u}) {
    for (const ExactScalar& rho : {ExactScalar(1, 4), ExactScalar(1, 8)}) {
      const LdlrReport r = ldlr_norm_wishart(n, N, beta, rho, D);
      const ExactScalar deg1 = ExactScalar(static_cast<unsigned long>(N)) * beta * beta / (2 * 40);
      EXPECT_EQ(r.terms[1], deg1);
      EXPECT_EQ(r.value_exact, 1 + deg1);
    }
  }
}

TEST(LdlrNorm, MonotoneInDegreeWithNonnegativeTerms) {
  auto table = std::make_shared<const CompositionTable>(16);
  double prev_wg = 0, prev_ws = 0;
  for (std::size_t D = 0; D <= 16; ++D) {
    const LdlrReport wg = ldlr_norm_wigner(60, ExactScalar(9, 10), ExactScalar(1, 6), D, table);
    const LdlrReport ws = ldlr_norm_wishart(60, 120, ExactScalar(6, 5), ExactScalar(1, 6), D, table);
    for (const auto& t : wg.terms) EXPECT_GE(sgn(t), 0);
    for (const auto& t : ws.terms) EXPECT_GE(sgn(t), 0);
    EXPECT_GE(wg.value, 1.0);
    EXPECT_GE(ws.value, 1.0);
    EXPECT_GE(wg.value, prev_wg);
    EXPECT_GE(ws.value, prev_ws);
    prev_wg = wg.value;
    prev_ws = ws.value;
  }
}

TEST(LdlrNorm, ZeroSnrAndRatioConventions) {
  const LdlrReport r = ldlr_norm_wigner(10, ExactScalar(0), ExactScalar(1, 2), 5);
  EXPECT_EQ(r.value_exact, 1);
  EXPECT_EQ(r.last_term_ratio, 0.0);
  EXPECT_EQ(ldlr_norm_wigner(10, ExactScalar(1), ExactScalar(1, 2), 0).last_term_ratio, 0.0);
  EXPECT_THROW(ldlr_norm_wigner(10, ExactScalar(-1), ExactScalar(1, 2), 2), std::invalid_argument);
  EXPECT_THROW(ldlr_norm_wishart(10, 0, ExactScalar(1), ExactScalar(1, 2), 2), std::invalid_argument);
}

TEST(WishartNorm, MonteCarloCrossCheck) {
  const std::size_t n = 20, N = 40, draws = 1000000;
  const double beta = 0.5, rho = 0.25;
  const LdlrReport r = ldlr_norm_wishart(n, N, ExactScalar(1, 2), ExactScalar(1, 4), 6);
  std::vector<double> coef;
  for (std::size_t d = 0; d <= 3; ++d) coef.push_back(wishart_coefficient(N, d).get_d());
  Philox g(2024, 6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto entry = [&] {
    const double u = unif(g);
    return u < rho / 2 ? 1 : (u < rho ? -1 : 0);
  };
  double sum = 0, sum_sq = 0;
  const double scale = 1.0 / (rho * static_cast<double>(n));
  for (std::size_t s = 0; s < draws; ++s) {
    int dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += entry() * entry();
    const double ip = dot * scale;
    const double x = beta * beta * ip * ip / 4.0;
    const double phi = coef[0] + x * (coef[1] + x * (coef[2] + x * coef[3]));
    sum += phi;
    sum_sq += phi * phi;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sum_sq / draws - mean * mean) / draws);
  EXPECT_LE(std::abs(r.value - mean), 3.0 * se) << "exact " << r.value << " mc " << mean << " se " << se;
}

TEST(AdBounds, FirstUpperBoundHoldsInRegime) {
  const MomentTable t = moment_table(400, ExactScalar(1, 2), 10);
  const AdBoundReport rep = check_Ad_bounds(t, 1.0, 10);
  EXPECT_TRUE(rep.pass);
  ASSERT_EQ(rep.rows.size(), 10u);
  for (const AdBoundRow& row : rep.rows) {
    EXPECT_TRUE(row.first_upper.hypothesis) << row.d;
    EXPECT_TRUE(row.first_upper.asserted);
    EXPECT_TRUE(row.first_upper.pass) << row.d;
    EXPECT_TRUE(row.g_sum_holds);
    EXPECT_GE(row.first_upper.log_slack, 0.0);
    EXPECT_NEAR(row.log_Ad, log_of(t.A[row.d]), 1e-12);
  }
}

TEST(AdBounds, DegreeOneCollapsesToSingleTerm) {
  const MomentTable t = moment_table(400, ExactScalar(1, 2), 3);
  EXPECT_EQ(g_term(400, ExactScalar(1, 2), 1, 1), t.A[1]);
  const AdBoundReport rep = check_Ad_bounds(t, 1.0, 3);
  EXPECT_DOUBLE_EQ(rep.rows[0].log_g_sum, rep.rows[0].log_Ad);
}

TEST(AdBounds, GSumDominatesExactMoments) {
  for (std::size_t n : {12u, 50u, 200u}) {
    const MomentTable t = moment_table(n, ExactScalar(1, 3), 10);
    for (std::size_t d = 1; d <= 10; ++d) {
      ExactScalar g = 0;
      for (std::size_t k = 1; k <= std::min(d, n); ++k) g += g_term(n, ExactScalar(1, 3), d, k);
      EXPECT_LE(t.A[d], g) << n << " " << d;
    }
  }
}

TEST(AdBounds, HypothesisGating) {
  const MomentTable t = moment_table(400, ExactScalar(1, 100), 10);
  const AdBoundReport rep = check_Ad_bounds(t, 1.0, 10);
  EXPECT_TRUE(rep.pass);
  for (const AdBoundRow& row : rep.rows) {
    EXPECT_FALSE(row.first_upper.hypothesis);
    EXPECT_FALSE(row.first_upper.asserted);
    EXPECT_TRUE(row.first_upper.pass);
  }
  EXPECT_TRUE(rep.rows[2].lower.hypothesis);  // w = 1 divides every d
  const AdBoundReport w3 = check_Ad_bounds(t, 1.0, 10, 3);
  for (const AdBoundRow& row : w3.rows) EXPECT_EQ(row.lower.hypothesis, row.d % 3 == 0);
  EXPECT_THROW(check_Ad_bounds(t, 0.0, 10), std::invalid_argument);
  EXPECT_THROW(check_Ad_bounds(t, 1.0, 11), std::invalid_argument);
  EXPECT_THROW(check_Ad_bounds(t, 1.0, 10, 0), std::invalid_argument);
}

TEST(AdBounds, BalancedMultinomial) {
  EXPECT_EQ(balanced_multinomial(3, 3), 90);   // 6!/(2!^3)
  EXPECT_EQ(balanced_multinomial(3, 2), 15);   // 6!/(2! 4!)
  EXPECT_EQ(balanced_multinomial(4, 1), 1);
}

const std::vector<std::size_t> kGrid{64, 216, 512};

TEST(RegimeProbe, DivergentGrid) {
  RegimeRules rules;
  rules.rho = [](std::size_t) { return ExactScalar(1, 4); };
  rules.degree = harness::cube_root_ceil;
  const RegimeReport rep = regime_probe(Model::kWigner, ExactScalar(3, 2), rules, kGrid);
  ASSERT_EQ(rep.points.size(), 3u);
  EXPECT_EQ(rep.points[0].D, 4u);
  EXPECT_EQ(rep.points[2].D, 8u);
  EXPECT_LT(rep.points[0].value, rep.points[1].value);
  EXPECT_LT(rep.points[1].value, rep.points[2].value);
  EXPECT_EQ(rep.verdict, RegimeVerdict::kDivergentConsistent);
}

TEST(RegimeProbe, BoundedGrid) {
  RegimeRules rules;
  rules.degree = harness::cube_root_ceil;
  rules.rho = [](std::size_t n) {
    const std::size_t D = harness::cube_root_ceil(n);
    return make_rational(static_cast<unsigned long>(harness::sqrt_ceil(D * n)), static_cast<unsigned long>(n));
  };
  EXPECT_EQ(rules.rho(64), ExactScalar(1, 4));
  EXPECT_EQ(rules.rho(216), ExactScalar(1, 6));
  EXPECT_EQ(rules.rho(512), ExactScalar(1, 8));
  const RegimeReport rep = regime_probe(Model::kWigner, ExactScalar(1, 2), rules, kGrid);
  for (const RegimePoint& p : rep.points) {
    EXPECT_LE(p.value, wigner_dense_limit(0.5) * 1.05) << p.n;
    EXPECT_LT(p.last_term_ratio, 1.0);
  }
  EXPECT_EQ(rep.verdict, RegimeVerdict::kBoundedConsistent);
}

TEST(RegimeProbe, DegreeZeroIsBounded) {
  RegimeRules rules;
  rules.rho = [](std::size_t) { return ExactScalar(1, 4); };
  rules.degree = [](std::size_t) { return std::size_t{0}; };
  rules.samples = [](std::size_t n) { return 4 * n; };
  for (Model m : {Model::kWigner, Model::kWishart}) {
    const RegimeReport rep = regime_probe(m, ExactScalar(3), rules, kGrid);
    for (const RegimePoint& p : rep.points) EXPECT_EQ(p.value, 1.0);
    EXPECT_EQ(rep.verdict, RegimeVerdict::kBoundedConsistent);
  }
}

TEST(RegimeProbe, ClassifierRules) {
  EXPECT_EQ(classify_regime({1.0, 1.1, 1.3}, {1.0, 1.2, 2.0}), RegimeVerdict::kDivergentConsistent);
  EXPECT_EQ(classify_regime({1.0, 1.04, 1.3}, {1.0, 1.2, 2.0}), RegimeVerdict::kInconclusive);
  EXPECT_EQ(classify_regime({1.0, 1.1, 1.3}, {1.0, 0.9, 2.0}), RegimeVerdict::kInconclusive);
  EXPECT_EQ(classify_regime({1.1, 1.12, 1.13}, {0.5, 0.9, 0.2}), RegimeVerdict::kBoundedConsistent);
  EXPECT_EQ(classify_regime({1.1, 1.12, 1.13}, {0.5, 0.91, 0.2}), RegimeVerdict::kInconclusive);
  EXPECT_EQ(classify_regime({}, {}), RegimeVerdict::kInconclusive);
  EXPECT_STREQ(to_string(RegimeVerdict::kBoundedConsistent), "bounded-consistent");
}

TEST(RegimeProbe, WishartNeedsSampleRule) {
  RegimeRules rules;
  rules.rho = [](std::size_t) { return ExactScalar(1, 4); };
  rules.degree = [](std::size_t) { return std::size_t{2}; };
  EXPECT_THROW(regime_probe(Model::kWishart, ExactScalar(1), rules, kGrid), std::invalid_argument);
}

}  // namespace
}  // namespace spikelab
