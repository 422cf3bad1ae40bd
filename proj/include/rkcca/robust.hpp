/*
 * Copyright 2026 The rkcca authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rkcca/kernels.hpp"
#include "rkcca/types.hpp"
#include "rkcca/weights.hpp"

namespace rkcca {

enum class LossKind { quadratic, huber, hampel };

/// Robust loss descriptor zeta(t) on t >= 0 with derivative zeta'(t) and
/// IRLS weight phi(t) = zeta'(t)/t (continuous limit phi(0) = 1).
///
///   quadratic  zeta = t^2/2                           phi = 1
///   huber      quadratic below c, linear above        phi = min(1, c/t)
///   hampel     quadratic / linear / descending / flat phi = 0 beyond c3
///
/// With `adaptive` set, the constants are derived from the median of the
/// residuals at the initial uniform weights (huber: c = median; hampel:
/// c1 = median, c2 = 2 c1, c3 = 4 c1) and held fixed afterwards, so the
/// IRLS majorization argument applies and the objective descends.
struct RobustLoss {
  LossKind kind = LossKind::quadratic;
  bool adaptive = false;
  double c = 0.0;                      // huber
  double c1 = 0.0, c2 = 0.0, c3 = 0.0; // hampel

  static RobustLoss quadratic() { return {}; }

  static RobustLoss huber(double c) {
    require(c > 0.0, "RobustLoss: huber constant must be positive");
    return {LossKind::huber, false, c, 0, 0, 0};
  }

  static RobustLoss huber_adaptive() {
    return {LossKind::huber, true, 0, 0, 0, 0};
  }

  static RobustLoss hampel(double c1, double c2, double c3) {
    require(c1 > 0.0 && c1 <= c2 && c2 <= c3,
            "RobustLoss: hampel constants must satisfy 0 < c1 <= c2 <= c3");
    return {LossKind::hampel, false, 0, c1, c2, c3};
  }

  static RobustLoss hampel_adaptive() {
    return {LossKind::hampel, true, 0, 0, 0, 0};
  }

  /// Copy of this loss with adaptive constants pinned from a residual scale
  /// (no-op for fixed losses and for the quadratic loss).
  RobustLoss resolved(double scale) const;

  double value(double t) const;   // zeta(t)
  double deriv(double t) const;   // zeta'(t)
  double weight(double t) const;  // phi(t) = zeta'(t)/t

  std::string name() const;
};

/// phi(t) for a (resolved) loss; errors on t < 0.
double loss_weight(const RobustLoss& loss, double t);

/// Outcome of a kernelized IRLS run.
struct KirwlsResult {
  WeightVector weights;
  std::vector<double> objective_trace;  // J at every visited iterate
  Vector residuals;                     // at the final weights
  RobustLoss loss;                      // applied loss, adaptive constants pinned
  int iterations = 0;                   // weight updates performed
  bool converged = false;
};

/// Kernelized IRLS on an inner-product matrix M, where M_ij = <B_i, B_j> for
/// the feature objects B_i being averaged. Starting from uniform weights,
/// iterates
///   eps_i = (M_ii - 2 (M w)_i + w^T M w)^{1/2}
///   w_i  ~  phi(eps_i), normalized to sum one
/// and stops when the relative change of J(w) = mean_i zeta(eps_i) drops
/// below `threshold`. Throws when every phi(eps_i) vanishes (total rejection
/// under a hampel loss).
KirwlsResult kirwls(const Eigen::Ref<const Matrix>& M, const RobustLoss& loss,
                    double threshold = 1e-8, int max_iter = 100);

/// Robust kernel mean element: IRLS on the raw Gram matrix.
KirwlsResult kirwls_mean(const GramMatrix& K, const RobustLoss& loss,
                         double threshold = 1e-8, int max_iter = 100);

/// Runs kirwls_mean and centers the Gram matrix with the resulting weights.
std::pair<CenteredGram, WeightVector> robust_center(const GramMatrix& K,
                                                    const RobustLoss& loss,
                                                    double threshold = 1e-8,
                                                    int max_iter = 100);

/// Weighted second-moment operator of centered features in dual form,
///   Sigma_hat = sum_i w_i Phi_c(X_i) (x) Phi_c(Y_i),
/// represented by the two centered Gram matrices and the weights.
struct DualOperator {
  WeightVector weights;
  CenteredGram gram_x;
  CenteredGram gram_y;     // equal to gram_x for a covariance operator
  bool covariance = false; // true when both views are the same sample

  Index n() const { return gram_x.n(); }

  /// Dual matrix W^{1/2} Kx~ W^{1/2} representing a covariance operator for
  /// matrix norms; Frobenius and spectral norms of this matrix equal the
  /// Hilbert-Schmidt and operator norms of the operator itself.
  Matrix dual_matrix() const;
};

/// Robust cross-covariance operator: IRLS on M = Kx~ o Ky~ (entrywise), the
/// Gram matrix of the tensors Phi_c(X_i) (x) Phi_c(Y_i).
std::pair<DualOperator, KirwlsResult> kirwls_cco(const CenteredGram& kx,
                                                 const CenteredGram& ky,
                                                 const RobustLoss& loss,
                                                 double threshold = 1e-8,
                                                 int max_iter = 100);

/// Robust covariance operator (the Y = X case of kirwls_cco).
std::pair<DualOperator, KirwlsResult> kirwls_cov(const CenteredGram& kx,
                                                 const RobustLoss& loss,
                                                 double threshold = 1e-8,
                                                 int max_iter = 100);

/// Robust r-th central moment element: IRLS on M = K~ entrywise to the r-th
/// power. r = 1 reproduces the mean iteration on centered features and r = 2
/// the covariance case.
std::pair<WeightVector, KirwlsResult> robust_central_moment(
    const CenteredGram& k, int r, const RobustLoss& loss,
    double threshold = 1e-8, int max_iter = 100);

/// Hilbert-Schmidt norm of a dual operator, sqrt(w^T (Kx~ o Ky~) w).
double hs_norm(const DualOperator& op);

}  // namespace rkcca
