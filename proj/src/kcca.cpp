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
#include "rkcca/kcca.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "rkcca/whiten.hpp"

namespace rkcca {

namespace {

// Flips a dual coefficient column so its first nonzero entry is positive.
void canonicalize_sign(Eigen::Ref<Matrix> alpha) {
  for (Index j = 0; j < alpha.cols(); ++j) {
    const double scale = alpha.col(j).cwiseAbs().maxCoeff();
    if (scale <= 0.0) continue;
    for (Index i = 0; i < alpha.rows(); ++i) {
      const double v = alpha(i, j);
      if (std::abs(v) > 1e-12 * scale) {
        if (v < 0.0) alpha.col(j) = -alpha.col(j);
        break;
      }
    }
  }
}

}  // namespace

KccaModel fit_kcca_weighted(const GramMatrix& kx, const GramMatrix& ky,
                            const WeightVector& center_wx,
                            const WeightVector& center_wy,
                            const WeightVector& op_w, double kappa, int p) {
  const Index n = kx.n();
  require(ky.n() == n, "fit_kcca_weighted: sample size mismatch");
  require(kappa > 0.0, "fit_kcca_weighted: kappa must be positive");
  require(p >= 1 && p <= n, "fit_kcca_weighted: p out of range");
  require(op_w.size() == n, "fit_kcca_weighted: operator weight length");

  const CenteredGram cx = center_weighted(kx, center_wx);
  const CenteredGram cy = center_weighted(ky, center_wy);

  const SpanBasis bx = span_basis(cx.values);
  const SpanBasis by = span_basis(cy.values);

  const auto w = op_w.values().asDiagonal();
  const Matrix a_xx = bx.feat.transpose() * w * bx.feat;
  const Matrix a_yy = by.feat.transpose() * w * by.feat;
  const Matrix a_yx = by.feat.transpose() * w * bx.feat;

  const Matrix isq_x = sym_inv_sqrt(a_xx, kappa);
  const Matrix isq_y = sym_inv_sqrt(a_yy, kappa);

  const Matrix r = isq_y * a_yx * isq_x;
  Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  require(svd.info() == Eigen::Success, "fit_kcca_weighted: SVD failed");

  const int available = static_cast<int>(svd.singularValues().size());
  const int m = std::min(p, available);

  KccaModel model{Vector(m),          Matrix(n, m), Matrix(n, m), center_wx,
                  center_wy,          op_w,         kappa,        kx,
                  ky};
  for (int j = 0; j < m; ++j) {
    model.rho[j] = svd.singularValues()[j];
    model.alpha_x.col(j) = bx.coef * (isq_x * svd.matrixV().col(j));
    model.alpha_y.col(j) = by.coef * (isq_y * svd.matrixU().col(j));
  }
  canonicalize_sign(model.alpha_x);
  canonicalize_sign(model.alpha_y);
  return model;
}

KccaModel classical_kcca(const GramMatrix& kx, const GramMatrix& ky,
                         double kappa, int p) {
  const WeightVector u = WeightVector::uniform(kx.n());
  return fit_kcca_weighted(kx, ky, u, u, u, kappa, p);
}

KccaModel robust_kcca(const GramMatrix& kx, const GramMatrix& ky,
                      const RobustLoss& loss, double kappa, int p,
                      double threshold, int max_iter) {
  require(kx.n() == ky.n(), "robust_kcca: sample size mismatch");
  auto [cx, wx] = robust_center(kx, loss, threshold, max_iter);
  auto [cy, wy] = robust_center(ky, loss, threshold, max_iter);
  auto [op, res] = kirwls_cco(cx, cy, loss, threshold, max_iter);
  return fit_kcca_weighted(kx, ky, wx, wy, op.weights, kappa, p);
}

std::pair<Matrix, Matrix> canonical_variates(
    const KccaModel& model, const Eigen::Ref<const Matrix>& k_x_eval,
    const Eigen::Ref<const Matrix>& k_y_eval) {
  require(k_x_eval.cols() == model.n() && k_y_eval.cols() == model.n(),
          "canonical_variates: evaluation Gram width mismatch");
  require(k_x_eval.rows() == k_y_eval.rows(),
          "canonical_variates: evaluation row count mismatch");
  const Matrix gx = center_test(k_x_eval, model.gram_x, model.center_wx);
  const Matrix gy = center_test(k_y_eval, model.gram_y, model.center_wy);
  return {gx * model.alpha_x, gy * model.alpha_y};
}

Matrix canonical_variates_x(const KccaModel& model,
                            const Eigen::Ref<const Matrix>& k_x_eval) {
  require(k_x_eval.cols() == model.n(),
          "canonical_variates_x: evaluation Gram width mismatch");
  return center_test(k_x_eval, model.gram_x, model.center_wx) * model.alpha_x;
}

Matrix canonical_variates_y(const KccaModel& model,
                            const Eigen::Ref<const Matrix>& k_y_eval) {
  require(k_y_eval.cols() == model.n(),
          "canonical_variates_y: evaluation Gram width mismatch");
  return center_test(k_y_eval, model.gram_y, model.center_wy) * model.alpha_y;
}

std::pair<Matrix, Matrix> training_variates(const KccaModel& model) {
  return canonical_variates(model, model.gram_x.values, model.gram_y.values);
}

}  // namespace rkcca
