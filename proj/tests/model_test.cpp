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

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "spikelab/model.hpp"

namespace spikelab {
namespace {

double top_eigenvalue(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
}

TEST(SparsityParams, EnforcesIntegralSupport) {
  EXPECT_EQ(SparsityParams(30, ExactScalar(1, 5), 1.0).support_size(), 6u);
  EXPECT_THROW(SparsityParams(31, ExactScalar(1, 5), 1.0), std::invalid_argument);
  EXPECT_THROW(SparsityParams(10, ExactScalar(0), 1.0), std::invalid_argument);
  EXPECT_THROW(SparsityParams(10, ExactScalar(11, 10), 1.0), std::invalid_argument);
  EXPECT_THROW(SparsityParams(10, ExactScalar(1, 2), 0.5), std::invalid_argument);
  EXPECT_THROW(SparsityParams(0, ExactScalar(1), 1.0), std::invalid_argument);
}

TEST(SparseRademacher, FullSupportAtRhoOne) {
  const SparsityParams p(4, ExactScalar(1), 1.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Signal x = sample_sparse_rademacher(p, Philox(s));
    EXPECT_EQ(x.nnz(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(std::abs(x[i]), 0.5);
  }
}

TEST(SparseRademacher, SupportSizeConcentrates) {
  const SparsityParams p(1000, ExactScalar(1, 10), 1.0);
  double total = 0;
  for (std::uint64_t s = 0; s < 200; ++s) total += static_cast<double>(sample_sparse_rademacher(p, Philox(s, 1)).nnz());
  EXPECT_NEAR(total / 200, 100.0, 10.0);
}

TEST(SparseRademacher, EntryDistributionMatchesPrior) {
  const SparsityParams p(1000, ExactScalar(1, 5), 1.0);
  const double mag = 1.0 / std::sqrt(200.0);
  std::size_t plus = 0, minus = 0, zero = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Signal x = sample_sparse_rademacher(p, Philox(s, 2));
    for (std::size_t i = 0; i < x.n(); ++i) {
      if (x[i] == mag) {
        ++plus;
      } else if (x[i] == -mag) {
        ++minus;
      } else {
        ASSERT_EQ(x[i], 0.0);
        ++zero;
      }
    }
  }
  const double n = 1e6;
  auto within = [&](std::size_t count, double prob) {
    return std::abs(static_cast<double>(count) - n * prob) <= 3 * std::sqrt(n * prob * (1 - prob));
  };
  EXPECT_TRUE(within(plus, 0.1)) << plus;
  EXPECT_TRUE(within(minus, 0.1)) << minus;
  EXPECT_TRUE(within(zero, 0.8)) << zero;
}

TEST(SparseRademacher, Deterministic) {
  const SparsityParams p(10, ExactScalar(1, 5), 1.0);
  const Signal a = sample_sparse_rademacher(p, Philox(77));
  const Signal b = sample_sparse_rademacher(p, Philox(77));
  EXPECT_EQ(a.entries(), b.entries());
}

TEST(PlantedSignal, UnitMagnitudeCase) {
  const SparsityParams p(8, ExactScalar(1, 4), 1.0);
  const Signal x = sample_planted_signal(p, Philox(3));
  EXPECT_EQ(x.nnz(), 2u);
  for (std::size_t i : x.support()) EXPECT_DOUBLE_EQ(std::abs(x[i]), 1.0 / std::sqrt(2.0));
  EXPECT_TRUE(x.is_sparse(p));
}

TEST(PlantedSignal, RespectsMagnitudeBox) {
  const SparsityParams p(100, ExactScalar(1, 10), 2.0);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Signal x = sample_planted_signal(p, Philox(s));
    ASSERT_NEAR(x.norm(), 1.0, 1e-12);
    ASSERT_EQ(x.nnz(), 10u);
    for (std::size_t i : x.support()) {
      ASSERT_GE(std::abs(x[i]), 1.0 / (2 * std::sqrt(10.0)) * (1 - 1e-12));
      ASSERT_LE(std::abs(x[i]), 2.0 / std::sqrt(10.0) * (1 + 1e-12));
    }
  }
}

TEST(PlantedSignal, LargeSupportStillSatisfiesBox) {
  const SparsityParams p(400, ExactScalar(1, 2), 1.5);
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_TRUE(sample_planted_signal(p, Philox(s)).is_sparse(p));
}

TEST(PlantedSignal, SupportAndSignsLookUniform) {
  const SparsityParams p(10, ExactScalar(1, 5), 1.0);
  std::vector<int> hits(10, 0);
  int positive = 0;
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) {
    const Signal x = sample_planted_signal(p, Philox(static_cast<std::uint64_t>(s), 5));
    for (std::size_t i : x.support()) {
      ++hits[i];
      positive += x[i] > 0;
    }
  }
  // Each index is in the support with probability 1/5.
  for (int h : hits) EXPECT_NEAR(h, draws / 5.0, 4 * std::sqrt(draws * 0.2 * 0.8));
  EXPECT_NEAR(positive, draws, 4 * std::sqrt(2.0 * draws * 0.25));
}

TEST(PlantedSignal, DifferentSeedsDifferentSupports) {
  const SparsityParams p(100, ExactScalar(1, 10), 2.0);
  EXPECT_NE(sample_planted_signal(p, Philox(1)).support(), sample_planted_signal(p, Philox(2)).support());
}

TEST(Goe, ScalarCase) {
  double s2 = 0;
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) {
    const double w = sample_goe(1, Philox(static_cast<std::uint64_t>(s), 9))(0, 0);
    s2 += w * w;
  }
  EXPECT_NEAR(s2 / draws, 2.0, 0.1);
}

TEST(Goe, OffDiagonalVarianceAndEdge) {
  const std::size_t n = 500;
  double pooled = 0, diag = 0;
  std::size_t count = 0;
  int in_edge = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const SymmetricMatrix W = sample_goe(n, Philox(s, 10));
    ASSERT_TRUE(W.matrix().isApprox(W.matrix().transpose(), 0.0));
    for (std::size_t j = 0; j < n; ++j) {
      diag += W(j, j) * W(j, j);
      for (std::size_t i = 0; i < j; ++i) pooled += W(i, j) * W(i, j);
    }
    count += n * (n - 1) / 2;
  }
  EXPECT_NEAR(pooled / static_cast<double>(count), 1.0 / n, 0.15 / n);
  EXPECT_NEAR(diag / (50.0 * n), 2.0 / n, 0.15 * 2.0 / n);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const double top = top_eigenvalue(sample_goe(n, Philox(s, 11)).matrix());
    in_edge += top >= 1.8 && top <= 2.2;
  }
  EXPECT_GE(in_edge, 95);
}

TEST(Wigner, NullIsGoe) {
  const SparsityParams p(20, ExactScalar(1, 4), 1.0);
  const Signal x = sample_planted_signal(p, Philox(1));
  const WignerInstance y = sample_wigner(x, WignerParams{20, 0.0}, Philox(5, 6));
  EXPECT_EQ(y.Y.matrix(), sample_goe(20, Philox(5, 6)).matrix());
}

TEST(Wigner, SpikeOutlier) {
  const std::size_t n = 300;
  const SparsityParams p(n, ExactScalar(1, 10), 1.0);
  int ok = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Signal x = sample_planted_signal(p, Philox(s, 1));
    const WignerInstance y = sample_wigner(x, WignerParams{n, 5.0}, Philox(s, 2));
    ok += std::abs(top_eigenvalue(y.Y.matrix()) - 5.2) <= 0.2;
  }
  EXPECT_GE(ok, 45);
}

TEST(Wigner, DeterministicAndChecked) {
  const SparsityParams p(12, ExactScalar(1, 3), 1.0);
  const Signal x = sample_planted_signal(p, Philox(1));
  EXPECT_EQ(sample_wigner(x, WignerParams{12, 2.0}, Philox(9)).Y.matrix(),
            sample_wigner(x, WignerParams{12, 2.0}, Philox(9)).Y.matrix());
  EXPECT_THROW(sample_wigner(x, WignerParams{13, 2.0}, Philox(9)), std::invalid_argument);
  EXPECT_THROW(sample_wigner(x, WignerParams{12, -1.0}, Philox(9)), std::invalid_argument);
}

TEST(Wishart, ParamsDerived) {
  const WishartParams wp{250, 1000, 1.0};
  EXPECT_DOUBLE_EQ(wp.gamma(), 0.25);
  EXPECT_DOUBLE_EQ(wp.snr_hat(), 2.0);
  EXPECT_THROW((WishartParams{10, 0, 1.0}.validate()), std::invalid_argument);
}

TEST(Wishart, RequiresUnitSpike) {
  const Signal x(Eigen::VectorXd::Constant(4, 1.0));
  EXPECT_THROW(sample_wishart(x, WishartParams{4, 10, 1.0}, Philox(1)), std::invalid_argument);
  EXPECT_NO_THROW(sample_wishart(x, WishartParams{4, 10, 0.0}, Philox(1)));
}

TEST(Wishart, NullDiagonalAveragesOne) {
  const Signal x(Eigen::VectorXd::Zero(100));
  const WishartInstance w = sample_wishart(x, WishartParams{100, 10000, 0.0}, Philox(4));
  EXPECT_NEAR(w.covariance().matrix().diagonal().mean(), 1.0, 0.05);
}

TEST(Wishart, CovarianceMatchesModel) {
  const std::size_t n = 20;
  const SparsityParams p(n, ExactScalar(1, 4), 1.0);
  const Signal x = sample_planted_signal(p, Philox(8));
  const WishartInstance w = sample_wishart(x, WishartParams{n, 100000, 2.0}, Philox(9));
  const Eigen::MatrixXd expected =
      Eigen::MatrixXd::Identity(n, n) + 2.0 * x.entries() * x.entries().transpose();
  EXPECT_LE((w.covariance().matrix() - expected).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Wishart, CachedCovarianceIsConsistentAndPsd) {
  const std::size_t n = 30;
  const SparsityParams p(n, ExactScalar(1, 5), 1.0);
  const Signal x = sample_planted_signal(p, Philox(2));
  const WishartInstance w = sample_wishart(x, WishartParams{n, 50, 1.0}, Philox(3));
  const Eigen::MatrixXd naive = w.samples().transpose() * w.samples() / 50.0;
  EXPECT_LE((w.covariance().matrix() - naive).norm(), 1e-10 * naive.norm());
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w.covariance().matrix(), Eigen::EigenvaluesOnly).eigenvalues();
  EXPECT_GE(ev.minCoeff(), -1e-12);
  // Concurrent first access builds a single cache.
  const WishartInstance copy = sample_wishart(x, WishartParams{n, 50, 1.0}, Philox(3));
  std::vector<const SymmetricMatrix*> seen(4);
  {
    std::vector<std::jthread> ts;
    for (int i = 0; i < 4; ++i) ts.emplace_back([&, i] { seen[static_cast<std::size_t>(i)] = &copy.covariance(); });
  }
  for (auto* s : seen) EXPECT_EQ(s, seen[0]);
}

TEST(Wishart, SpectralEdgeAboveThreshold) {
  const std::size_t n = 250, N = 1000;
  const SparsityParams p(n, ExactScalar(1), 1.0);
  int ok = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Signal x = sample_planted_signal(p, Philox(s, 20));
    const WishartInstance w = sample_wishart(x, WishartParams{n, N, 1.0}, Philox(s, 21));
    ok += std::abs(top_eigenvalue(w.covariance().matrix()) - 2.5) <= 0.15;
  }
  EXPECT_GE(ok, 45);
}

TEST(SymmetricMatrix, RejectsAsymmetry) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymmetricMatrix{m}, std::invalid_argument);
  const SymmetricMatrix s = SymmetricMatrix::from_upper(m);
  EXPECT_EQ(s(1, 0), 2.0);
}

}  // namespace
}  // namespace spikelab
