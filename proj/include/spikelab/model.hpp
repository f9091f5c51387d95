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

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spikelab/rational.hpp"
#include "spikelab/rng.hpp"

namespace spikelab {

enum class Model { kWigner, kWishart };

inline const char* to_string(Model m) { return m == Model::kWigner ? "wigner" : "wishart"; }

inline Model parse_model(const std::string& s) {
  if (s == "wigner") return Model::kWigner;
  if (s == "wishart") return Model::kWishart;
  throw std::invalid_argument("unknown model '" + s + "' (expected wigner|wishart)");
}

/// Dimension n, sparsity fraction rho (exact) and magnitude-ratio bound A.
/// rho * n must be a positive integer: that is the support size of an exact
/// (rho, A)-sparse signal.
class SparsityParams {
 public:
  SparsityParams(std::size_t n, ExactScalar rho, double A) : n_(n), rho_(std::move(rho)), A_(A) {
    rho_.canonicalize();
    if (n_ == 0) throw std::invalid_argument("SparsityParams: n must be positive");
    if (sgn(rho_) <= 0 || rho_ > 1) {
      throw std::invalid_argument("SparsityParams: rho must lie in (0, 1], got " + to_string(rho_));
    }
    if (!(A_ >= 1.0) || !std::isfinite(A_)) {
      throw std::invalid_argument("SparsityParams: A must be a finite value >= 1");
    }
    const ExactScalar k = rho_ * static_cast<unsigned long>(n_);
    if (k.get_den() != 1) {
      throw std::invalid_argument("SparsityParams: rho*n = " + to_string(k) + " is not an integer");
    }
    support_size_ = k.get_num().get_ui();
  }

  std::size_t n() const { return n_; }
  const ExactScalar& rho() const { return rho_; }
  double rho_value() const { return rho_.get_d(); }
  double A() const { return A_; }
  /// rho * n.
  std::size_t support_size() const { return support_size_; }

 private:
  std::size_t n_;
  ExactScalar rho_;
  double A_;
  std::size_t support_size_ = 0;
};

/// Spike vector. Holds raw entries; whether they are exactly (rho, A)-sparse
/// is checked separately by is_sparse().
class Signal {
 public:
  Signal() = default;
  explicit Signal(Eigen::VectorXd entries) : entries_(std::move(entries)) {}

  std::size_t n() const { return static_cast<std::size_t>(entries_.size()); }
  const Eigen::VectorXd& entries() const { return entries_; }
  double operator[](std::size_t i) const { return entries_[static_cast<Eigen::Index>(i)]; }
  double norm() const { return entries_.norm(); }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
      if (entries_[i] != 0.0) s.push_back(static_cast<std::size_t>(i));
    }
    return s;
  }
  std::size_t nnz() const { return support().size(); }

  /// Entrywise sign in {-1, 0, +1}.
  std::vector<int> sign() const {
    std::vector<int> s(n());
    for (std::size_t i = 0; i < n(); ++i) s[i] = ((*this)[i] > 0) - ((*this)[i] < 0);
    return s;
  }

  /// Exact (rho, A)-sparse check: unit norm within 1e-12, rho*n nonzeros,
  /// magnitudes in [1/(A sqrt(rho n)), A/sqrt(rho n)].
  bool is_sparse(const SparsityParams& p, double tol = 1e-12) const {
    if (n() != p.n() || std::abs(norm() - 1.0) > tol || nnz() != p.support_size()) return false;
    const double base = 1.0 / std::sqrt(static_cast<double>(p.support_size()));
    const double lo = base / p.A() * (1 - tol);
    const double hi = base * p.A() * (1 + tol);
    return std::all_of(entries_.begin(), entries_.end(), [&](double e) {
      return e == 0.0 || (std::abs(e) >= lo && std::abs(e) <= hi);
    });
  }

 private:
  Eigen::VectorXd entries_;
};

/// Dense symmetric matrix; Y == Y^T holds bit-for-bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Validates exact symmetry of a full matrix.
  explicit SymmetricMatrix(Eigen::MatrixXd full) : m_(std::move(full)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("SymmetricMatrix: not square");
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        if (m_(i, j) != m_(j, i)) throw std::invalid_argument("SymmetricMatrix: not symmetric");
      }
    }
  }

  /// Reads the upper triangle and mirrors it.
  static SymmetricMatrix from_upper(Eigen::MatrixXd m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymmetricMatrix: not square");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = j + 1; i < m.rows(); ++i) m(i, j) = m(j, i);
    }
    SymmetricMatrix s;
    s.m_ = std::move(m);
    return s;
  }

  std::size_t n() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  SymmetricMatrix scaled(double c) const { return from_upper(m_ * c); }

 private:
  Eigen::MatrixXd m_;
};

struct WignerParams {
  std::size_t n = 0;
  double lambda = 0.0;

  void validate() const {
    if (n == 0) throw std::invalid_argument("WignerParams: n must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("WignerParams: lambda must be >= 0");
  }
};

struct WishartParams {
  std::size_t n = 0;
  std::size_t N = 0;
  double beta = 0.0;

  double gamma() const { return static_cast<double>(n) / static_cast<double>(N); }
  /// beta / sqrt(gamma).
  double snr_hat() const { return beta / std::sqrt(gamma()); }

  void validate() const {
    if (n == 0) throw std::invalid_argument("WishartParams: n must be positive");
    if (N == 0) throw std::invalid_argument("WishartParams: N must be >= 1");
    if (!(beta >= 0.0)) throw std::invalid_argument("WishartParams: beta must be >= 0");
  }
};

struct WignerInstance {
  SymmetricMatrix Y;
  std::size_t n() const { return Y.n(); }
};

/// (1/count) * sum of y y^T over rows [first, first + count) of `samples`.
inline SymmetricMatrix sample_covariance(const Eigen::MatrixXd& samples, Eigen::Index first,
                                         Eigen::Index count) {
  if (count <= 0 || first < 0 || first + count > samples.rows()) {
    throw std::invalid_argument("sample_covariance: bad sample range");
  }
  const Eigen::Index n = samples.cols();
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(n, n);
  const auto block = samples.middleRows(first, count);
  upper.selfadjointView<Eigen::Upper>().rankUpdate(block.transpose(), 1.0 / static_cast<double>(count));
  return SymmetricMatrix::from_upper(std::move(upper));
}

/// N samples (rows of an N x n matrix) with a lazily built sample covariance.
/// The cache is shared between copies and built at most once, so instances may
/// be read from several threads.
class WishartInstance {
 public:
  WishartInstance() = default;
  explicit WishartInstance(Eigen::MatrixXd samples)
      : samples_(std::move(samples)), cache_(std::make_shared<Cache>()) {
    if (samples_.rows() < 1 || samples_.cols() < 1) {
      throw std::invalid_argument("WishartInstance: need at least one sample of positive dimension");
    }
  }

  std::size_t n() const { return static_cast<std::size_t>(samples_.cols()); }
  std::size_t N() const { return static_cast<std::size_t>(samples_.rows()); }
  const Eigen::MatrixXd& samples() const { return samples_; }

  const SymmetricMatrix& covariance() const {
    std::call_once(cache_->once, [this] { cache_->Y = sample_covariance(samples_, 0, samples_.rows()); });
    return cache_->Y;
  }

 private:
  struct Cache {
    std::once_flag once;
    SymmetricMatrix Y;
  };
  Eigen::MatrixXd samples_;
  std::shared_ptr<Cache> cache_;
};

// --- samplers -------------------------------------------------------------

/// i.i.d. entries: +-1/sqrt(rho n) with probability rho/2 each, else 0.
/// The norm is not forced to 1 and an empty support is a legal draw.
inline Signal sample_sparse_rademacher(const SparsityParams& p, Philox rng) {
  const double rho = p.rho_value();
  const double mag = 1.0 / std::sqrt(static_cast<double>(p.support_size()));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(p.n()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double u = unif(rng);
    x[i] = u < rho / 2 ? mag : (u < rho ? -mag : 0.0);
  }
  return Signal(std::move(x));
}

/// Exact (rho, A)-sparse signal: uniform support of size rho n, uniform signs,
/// log-uniform magnitudes normalized to unit norm. A draw whose normalized
/// magnitudes leave the box is rejected; successive attempts narrow the
/// log-width of the sampling box from log A towards log(A)/2, at which point
/// normalization can no longer leave the box.
inline Signal sample_planted_signal(const SparsityParams& p, Philox rng) {
  const std::size_t n = p.n();
  const std::size_t k = p.support_size();
  const double base = 1.0 / std::sqrt(static_cast<double>(k));
  constexpr int kMaxAttempts = 100;

  // Partial Fisher-Yates for a uniform k-subset.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<std::size_t> support(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(support.begin(), support.end());

  std::vector<double> signs(k);
  std::bernoulli_distribution coin(0.5);
  for (auto& s : signs) s = coin(rng) ? 1.0 : -1.0;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (p.A() == 1.0) {
    for (std::size_t i = 0; i < k; ++i) x[static_cast<Eigen::Index>(support[i])] = signs[i] * base;
    return Signal(std::move(x));
  }

  const double log_a = std::log(p.A());
  std::vector<double> mags(k);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double width = log_a * (1.0 - 0.5 * attempt / (kMaxAttempts - 1)) * (1.0 - 1e-9);
    std::uniform_real_distribution<double> logu(-width, width);
    double sq = 0.0;
    for (auto& m : mags) {
      m = std::exp(logu(rng));
      sq += m * m;
    }
    const double scale = 1.0 / std::sqrt(sq);
    x.setZero();
    for (std::size_t i = 0; i < k; ++i) {
      x[static_cast<Eigen::Index>(support[i])] = signs[i] * mags[i] * scale;
    }
    Signal s(x);
    if (s.is_sparse(p)) return s;
  }
  throw std::runtime_error("sample_planted_signal: could not satisfy the (rho, A) box");
}

/// GOE(n): diagonal N(0, 2/n), off-diagonal N(0, 1/n), symmetric.
inline SymmetricMatrix sample_goe(std::size_t n, Philox rng) {
  if (n == 0) throw std::invalid_argument("sample_goe: n must be positive");
  const auto dim = static_cast<Eigen::Index>(n);
  const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
  const double diag_sd = std::sqrt(2.0) * off_sd;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd upper(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    upper(i, i) = diag_sd * gauss(rng);
    for (Eigen::Index j = i + 1; j < dim; ++j) upper(i, j) = off_sd * gauss(rng);
  }
  return SymmetricMatrix::from_upper(std::move(upper));
}

/// Y = W + lambda x x^T with W ~ GOE(n).
inline WignerInstance sample_wigner(const Signal& x, const WignerParams& wp, Philox rng) {
  wp.validate();
  if (x.n() != wp.n) throw std::invalid_argument("sample_wigner: signal dimension != n");
  SymmetricMatrix W = sample_goe(wp.n, rng);
  if (wp.lambda == 0.0) return {std::move(W)};
  Eigen::MatrixXd Y = W.matrix();
  Y.noalias() += wp.lambda * x.entries() * x.entries().transpose();
  return {SymmetricMatrix::from_upper(std::move(Y))};
}

/// N samples y = u + sqrt(beta) g x, u ~ N(0, I_n), g ~ N(0, 1); this is
/// N(0, I + beta x x^T) when |x| = 1.
inline WishartInstance sample_wishart(const Signal& x, const WishartParams& wp, Philox rng) {
  wp.validate();
  if (x.n() != wp.n) throw std::invalid_argument("sample_wishart: signal dimension != n");
  if (wp.beta > 0.0 && std::abs(x.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("sample_wishart: spike must have unit norm when beta > 0");
  }
  const auto n = static_cast<Eigen::Index>(wp.n);
  const auto N = static_cast<Eigen::Index>(wp.N);
  const double root_beta = std::sqrt(wp.beta);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd samples(N, n);
  for (Eigen::Index s = 0; s < N; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) samples(s, i) = gauss(rng);
    const double g = gauss(rng);
    if (wp.beta > 0.0) samples.row(s) += (root_beta * g) * x.entries().transpose();
  }
  return WishartInstance(std::move(samples));
}

}  // namespace spikelab
