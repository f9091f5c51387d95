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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spikelab/detect.hpp"
#include "spikelab/eigen.hpp"
#include "spikelab/model.hpp"
#include "spikelab/search.hpp"

namespace spikelab {

/// Output of support-and-sign recovery: xbar_j = sign(z_j) 1{|z_j| > threshold}.
struct SupportSignEstimate {
  std::vector<int> xbar;
  CandidateVector vstar;
  Eigen::VectorXd z;
  double threshold_used = 0.0;
  SearchResult search;

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < xbar.size(); ++j) {
      if (xbar[j] != 0) s.push_back(j);
    }
    return s;
  }

  /// xbar_j != 0 iff |z_j| > threshold, with matching signs.
  bool consistent() const {
    if (static_cast<Eigen::Index>(xbar.size()) != z.size()) return false;
    for (std::size_t j = 0; j < xbar.size(); ++j) {
      const double zj = z[static_cast<Eigen::Index>(j)];
      const int expect = std::abs(zj) > threshold_used ? (zj > 0) - (zj < 0) : 0;
      if (xbar[j] != expect) return false;
    }
    return true;
  }
};

struct SpikeEstimate {
  Eigen::VectorXd xtilde;
  double leading_eigenvalue = 0.0;
};

struct PcaResult {
  double lambda_max = 0.0;
  Eigen::VectorXd v_max;
};

/// sign(xbar) == sign(x) or sign(xbar) == -sign(x), entrywise. Equal supports
/// are implied.
inline bool signs_match_up_to_flip(const std::vector<int>& xbar, const Signal& x) {
  const std::vector<int> s = x.sign();
  if (s.size() != xbar.size()) return false;
  bool same = true, flipped = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    same = same && xbar[i] == s[i];
    flipped = flipped && xbar[i] == -s[i];
  }
  return same || flipped;
}

inline bool support_matches(const std::vector<int>& xbar, const Signal& x) {
  const std::vector<int> s = x.sign();
  if (s.size() != xbar.size()) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((xbar[i] != 0) != (s[i] != 0)) return false;
  }
  return true;
}

namespace detail {

inline SupportSignEstimate threshold_estimate(Eigen::VectorXd z, double threshold, SearchResult search) {
  SupportSignEstimate est;
  est.xbar.resize(static_cast<std::size_t>(z.size()));
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    // Strict inequality: |z_j| equal to the threshold stays off the support.
    est.xbar[static_cast<std::size_t>(j)] = std::abs(z[j]) > threshold ? (z[j] > 0) - (z[j] < 0) : 0;
  }
  est.z = std::move(z);
  est.threshold_used = threshold;
  est.vstar = search.best_vector;
  est.search = std::move(search);
  if (!est.consistent()) throw std::logic_error("support/sign estimate violates its thresholding invariant");
  return est;
}

}  // namespace detail

/// beta ell / (2 sqrt(3) A^2 rho n).
inline double wishart_recovery_threshold(const SparsityParams& sp, const WishartParams& wp, std::size_t ell) {
  return wp.beta * static_cast<double>(ell) /
         (2.0 * std::sqrt(3.0) * sp.A() * sp.A() * static_cast<double>(sp.support_size()));
}

/// lambda ell / (4 A^2 rho n).
inline double wigner_recovery_threshold(const SparsityParams& sp, const WignerParams& wp, std::size_t ell) {
  return wp.lambda * static_cast<double>(ell) / (4.0 * sp.A() * sp.A() * static_cast<double>(sp.support_size()));
}

/// Splits the N samples into two halves of floor(N/2) (dropping the last one
/// when N is odd), searches v* on the first half's covariance and thresholds
/// z = (Y'' - I) v* built from the second half.
inline SupportSignEstimate wishart_recover(const WishartInstance& data, const SparsityParams& sp,
                                           const WishartParams& wp, std::size_t ell, SearchOptions opt = {}) {
  wp.validate();
  detail::check_same_n(sp, data.n());
  detail::check_same_n(sp, wp.n);
  detail::check_ell(ell, data.n());
  if (data.N() < 2) throw std::invalid_argument("wishart_recover: need N >= 2 samples");
  const auto half = static_cast<Eigen::Index>(data.N() / 2);
  const SymmetricMatrix first = sample_covariance(data.samples(), 0, half);
  const SymmetricMatrix second = sample_covariance(data.samples(), half, half);
  SearchResult search = max_quadratic_form(first, ell, opt);
  const Eigen::VectorXd v = search.best_vector.dense(data.n());
  Eigen::VectorXd z = second.matrix() * v - v;
  return detail::threshold_estimate(std::move(z), wishart_recovery_threshold(sp, wp, ell), std::move(search));
}

/// (Y + W~)/sqrt(2) and (Y - W~)/sqrt(2) for a fresh W~ ~ GOE(n).
inline std::pair<SymmetricMatrix, SymmetricMatrix> wigner_split(const SymmetricMatrix& Y, Philox rng) {
  const SymmetricMatrix noise = sample_goe(Y.n(), rng);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  return {SymmetricMatrix::from_upper((Y.matrix() + noise.matrix()) * inv_root2),
          SymmetricMatrix::from_upper((Y.matrix() - noise.matrix()) * inv_root2)};
}

/// Splits Y with fresh GOE noise drawn from `rng`, searches v* on the first
/// copy and thresholds z = Y'' v* from the second.
inline SupportSignEstimate wigner_recover(const WignerInstance& data, const SparsityParams& sp,
                                          const WignerParams& wp, std::size_t ell, Philox rng,
                                          SearchOptions opt = {}) {
  wp.validate();
  detail::check_same_n(sp, data.n());
  detail::check_same_n(sp, wp.n);
  detail::check_ell(ell, data.n());
  auto [first, second] = wigner_split(data.Y, rng);
  SearchResult search = max_quadratic_form(first, ell, opt);
  Eigen::VectorXd z = second.matrix() * search.best_vector.dense(data.n());
  return detail::threshold_estimate(std::move(z), wigner_recovery_threshold(sp, wp, ell), std::move(search));
}

/// Leading unit eigenvector of the principal submatrix on `support`, embedded
/// back into R^n with its largest coordinate positive.
inline SpikeEstimate spectral_refine(const SymmetricMatrix& Y, const std::vector<std::size_t>& support,
                                     PowerIterationOptions opt = {}) {
  if (support.empty()) throw std::invalid_argument("spectral_refine: empty support");
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    if (support[static_cast<std::size_t>(a)] >= Y.n()) throw std::out_of_range("spectral_refine: index outside [n]");
    for (Eigen::Index b = 0; b < k; ++b) {
      sub(a, b) = Y(support[static_cast<std::size_t>(a)], support[static_cast<std::size_t>(b)]);
    }
  }
  const EigenPair pair = leading_eigenpair(sub, opt);
  SpikeEstimate est;
  est.leading_eigenvalue = pair.value;
  est.xtilde = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(Y.n()));
  for (Eigen::Index a = 0; a < k; ++a) {
    est.xtilde[static_cast<Eigen::Index>(support[static_cast<std::size_t>(a)])] = pair.vector[a];
  }
  est.xtilde.normalize();
  canonicalize_sign(est.xtilde);
  return est;
}

inline SpikeEstimate spectral_refine(const WignerInstance& data, const std::vector<std::size_t>& support,
                                     PowerIterationOptions opt = {}) {
  return spectral_refine(data.Y, support, opt);
}

/// Uses the covariance of all N samples.
inline SpikeEstimate spectral_refine(const WishartInstance& data, const std::vector<std::size_t>& support,
                                     PowerIterationOptions opt = {}) {
  return spectral_refine(data.covariance(), support, opt);
}

/// Leading eigenpair of the full matrix (dense symmetric eigensolver).
inline PcaResult pca_baseline(const SymmetricMatrix& Y) {
  if (Y.n() == 0) throw std::invalid_argument("pca_baseline: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Y.matrix());
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca_baseline: eigensolver failed");
  PcaResult r;
  const Eigen::Index top = Y.matrix().rows() - 1;  // eigenvalues ascend
  r.lambda_max = solver.eigenvalues()[top];
  r.v_max = solver.eigenvectors().col(top).normalized();
  canonicalize_sign(r.v_max);
  return r;
}

/// <a, b>^2 for unit vectors.
inline double overlap_sq(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double d = a.dot(b);
  return d * d;
}

}  // namespace spikelab
