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
#include <random>
#include <stdexcept>

#include "spikelab/rng.hpp"

namespace spikelab {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
  bool converged = false;
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5eed5eedULL;
};

/// Flips v so that its largest-magnitude coordinate is positive (lowest index
/// wins ties).
inline void canonicalize_sign(Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v.size() > 0 && v[best] < 0) v = -v;
}

/// Smallest Gershgorin lower bound min_i (M_ii - sum_{j != i} |M_ij|).
inline double gershgorin_lower(const Eigen::MatrixXd& M) {
  double lo = 0.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    const double radius = M.row(i).cwiseAbs().sum() - std::abs(M(i, i));
    lo = i == 0 ? M(i, i) - radius : std::min(lo, M(i, i) - radius);
  }
  return lo;
}

/// Leading (largest algebraic) eigenpair of a symmetric matrix by power
/// iteration on M + cI, where c lifts the Gershgorin lower bound to zero so
/// the top eigenvalue also dominates in magnitude. Stops when the relative
/// residual |Mv - theta v| / max(1, |theta| + c) drops below the tolerance.
inline EigenPair leading_eigenpair(const Eigen::MatrixXd& M, PowerIterationOptions opt = {}) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw std::invalid_argument("leading_eigenpair: need a non-empty square matrix");
  }
  const Eigen::Index n = M.rows();
  EigenPair out;
  if (n == 1) {
    out.value = M(0, 0);
    out.vector = Eigen::VectorXd::Ones(1);
    out.converged = true;
    return out;
  }
  const double shift = std::max(0.0, -gershgorin_lower(M));
  Philox rng(opt.seed, static_cast<std::uint64_t>(n));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  v.normalize();

  Eigen::VectorXd w(n);
  double theta = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    w.noalias() = M * v;
    theta = v.dot(w);
    const double residual = (w - theta * v).norm();
    out.iterations = it;
    w += shift * v;
    const double scale = std::max(1.0, std::abs(theta) + shift);
    const double wn = w.norm();
    if (wn == 0.0) {  // M + cI annihilated v: M is c' I with c' = -shift
      out.converged = true;
      break;
    }
    if (residual <= opt.tolerance * scale) {
      out.converged = true;
      break;
    }
    v = w / wn;
  }
  out.value = theta;
  out.vector = v;
  canonicalize_sign(out.vector);
  return out;
}

}  // namespace spikelab
