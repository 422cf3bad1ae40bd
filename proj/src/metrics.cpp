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
#include "rkcca/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rkcca {

NormKind parse_norm(const std::string& s) {
  if (s == "O" || s == "o") return NormKind::O;
  if (s == "F" || s == "f") return NormKind::F;
  if (s == "M" || s == "m") return NormKind::M;
  if (s == "S" || s == "s") return NormKind::S;
  throw std::invalid_argument("parse_norm: unknown norm '" + s + "'");
}

std::string norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::O:
      return "O";
    case NormKind::F:
      return "F";
    case NormKind::M:
      return "M";
    case NormKind::S:
      return "S";
  }
  return "?";
}

double matrix_norm(const Eigen::Ref<const Matrix>& A, NormKind kind) {
  require(A.size() > 0, "matrix_norm: empty matrix");
  switch (kind) {
    case NormKind::O:
      return A.cwiseAbs().colwise().sum().maxCoeff();
    case NormKind::F:
      return A.norm();
    case NormKind::M:
      return A.cwiseAbs().maxCoeff();
    case NormKind::S: {
      // largest singular value via the smaller of A^T A / A A^T
      const Matrix g = A.rows() <= A.cols()
                           ? Matrix(A * A.transpose())
                           : Matrix(A.transpose() * A);
      Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
      require(es.info() == Eigen::Success, "matrix_norm: eigensolver failed");
      return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
    }
  }
  throw std::logic_error("matrix_norm: unknown norm kind");
}

double eta_kco(const Eigen::Ref<const Matrix>& k_sample,
               const Eigen::Ref<const Matrix>& k_cross,
               const Eigen::Ref<const Matrix>& k_pop) {
  const Index n = k_sample.rows();
  const Index N = k_pop.rows();
  require(k_sample.cols() == n, "eta_kco: sample Gram must be square");
  require(k_pop.cols() == N, "eta_kco: population Gram must be square");
  require(k_cross.rows() == n && k_cross.cols() == N,
          "eta_kco: cross Gram must be n x N");
  const double nn = static_cast<double>(n);
  const double NN = static_cast<double>(N);
  return k_sample.array().square().sum() / (nn * nn) -
         2.0 * k_cross.array().square().sum() / (NN * nn) +
         k_pop.array().square().sum() / (NN * NN);
}

double eta_rkco(const Eigen::Ref<const Matrix>& k_sample,
                const Eigen::Ref<const Matrix>& k_cross,
                const Eigen::Ref<const Matrix>& k_pop, const WeightVector& w) {
  const Index n = k_sample.rows();
  const Index N = k_pop.rows();
  require(w.size() == n, "eta_rkco: weight length mismatch");
  require(k_sample.cols() == n, "eta_rkco: sample Gram must be square");
  require(k_pop.cols() == N, "eta_rkco: population Gram must be square");
  require(k_cross.rows() == n && k_cross.cols() == N,
          "eta_rkco: cross Gram must be n x N");
  const double NN = static_cast<double>(N);
  const Matrix s2 = k_sample.array().square();
  const double sample_term = w.values().dot(s2 * w.values());
  const double cross_term =
      w.values().dot(k_cross.array().square().matrix().rowwise().sum()) / NN;
  return sample_term - 2.0 * cross_term +
         k_pop.array().square().sum() / (NN * NN);
}

double eta_co(const DualOperator& op_id, const DualOperator& op_cd,
              NormKind kind) {
  require(op_id.covariance && op_cd.covariance,
          "eta_co: covariance operators required");
  require(op_id.n() == op_cd.n(), "eta_co: sample size mismatch");
  const double norm_id = matrix_norm(op_id.dual_matrix(), kind);
  const double norm_cd = matrix_norm(op_cd.dual_matrix(), kind);
  require(norm_cd > 0.0, "eta_co: contaminated operator norm is zero");
  return std::abs(1.0 - norm_id / norm_cd);
}

double eta_rho(const Eigen::Ref<const Vector>& eif_id,
               const Eigen::Ref<const Vector>& eif_cd) {
  require(eif_id.size() == eif_cd.size(), "eta_rho: length mismatch");
  const double denom = eif_cd.norm();
  require(denom > 0.0, "eta_rho: contaminated influence norm is zero");
  return std::abs(1.0 - eif_id.norm() / denom);
}

double eta_f(const Eigen::Ref<const Matrix>& fx_id,
             const Eigen::Ref<const Matrix>& fy_id,
             const Eigen::Ref<const Matrix>& fx_cd,
             const Eigen::Ref<const Matrix>& fy_cd) {
  require(fx_id.rows() == fy_id.rows() && fx_id.cols() == fy_id.cols(),
          "eta_f: ideal array shape mismatch");
  require(fx_cd.rows() == fy_cd.rows() && fx_cd.cols() == fy_cd.cols(),
          "eta_f: contaminated array shape mismatch");
  const double denom = (fx_cd - fy_cd).norm();
  require(denom > 0.0, "eta_f: contaminated influence norm is zero");
  return std::abs(1.0 - (fx_id - fy_id).norm() / denom);
}

}  // namespace rkcca
