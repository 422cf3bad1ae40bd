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

#include <utility>

#include "rkcca/kernels.hpp"
#include "rkcca/robust.hpp"
#include "rkcca/types.hpp"
#include "rkcca/weights.hpp"

namespace rkcca {

/// Fitted kernel CCA model in dual (sample) coordinates.
///
/// Column j of alpha_x / alpha_y holds the dual coefficients of the j-th
/// canonical pair over the centered kernel sections, normalized so that
/// <f, (Sigma_hat + kappa I) f> = 1 for each variate. rho is descending and
/// rho_j is the canonical correlation of pair j. Each alpha column is sign
/// fixed so its first nonzero entry is positive.
///
/// center_wx / center_wy are the weights the two views were centered with,
/// op_w the weights defining the second-moment operators. The classical
/// estimator uses uniform weights everywhere.
struct KccaModel {
  Vector rho;
  Matrix alpha_x;
  Matrix alpha_y;
  WeightVector center_wx;
  WeightVector center_wy;
  WeightVector op_w;
  double kappa = 0.0;
  GramMatrix gram_x;
  GramMatrix gram_y;

  Index n() const { return gram_x.n(); }
  int components() const { return static_cast<int>(rho.size()); }
};

/// Core weighted fit: centers each view with its centering weights, builds
/// the op_w-weighted covariance operators, and solves the whitened problem
///   (Sigma_yy + kappa I)^{-1/2} Sigma_yx (Sigma_xx + kappa I)^{-1/2}
/// by SVD on the span of the centered features. Returns at most
/// min(p, rank_x, rank_y) canonical pairs.
KccaModel fit_kcca_weighted(const GramMatrix& kx, const GramMatrix& ky,
                            const WeightVector& center_wx,
                            const WeightVector& center_wy,
                            const WeightVector& op_w, double kappa, int p);

/// Classical kernel CCA: uniform weights for centering and operators.
KccaModel classical_kcca(const GramMatrix& kx, const GramMatrix& ky,
                         double kappa = 1e-5, int p = 1);

/// Robust kernel CCA: each view is centered with its own robust mean-element
/// weights, a shared weight vector is estimated by the robust cross-covariance
/// iteration on the centered pair, and all three operators are built with that
/// shared vector before solving the same whitened problem. The quadratic loss
/// reproduces classical_kcca exactly.
KccaModel robust_kcca(const GramMatrix& kx, const GramMatrix& ky,
                      const RobustLoss& loss, double kappa = 1e-5, int p = 1,
                      double threshold = 1e-8, int max_iter = 100);

/// Canonical variate values at evaluation points, given raw T x n cross
/// evaluation matrices against the training sample. Rows are centered with
/// the model's centering weights before projecting onto the dual
/// coefficients. Returns a T x p matrix per view.
std::pair<Matrix, Matrix> canonical_variates(
    const KccaModel& model, const Eigen::Ref<const Matrix>& k_x_eval,
    const Eigen::Ref<const Matrix>& k_y_eval);

/// Single-view projections, for evaluation points where only one view is
/// observed (e.g. unlabeled test data on the label side).
Matrix canonical_variates_x(const KccaModel& model,
                            const Eigen::Ref<const Matrix>& k_x_eval);
Matrix canonical_variates_y(const KccaModel& model,
                            const Eigen::Ref<const Matrix>& k_y_eval);

/// Variate values of the training sample itself (evaluation at the training
/// points); row i holds f_j(X_i) across components j.
std::pair<Matrix, Matrix> training_variates(const KccaModel& model);

}  // namespace rkcca
