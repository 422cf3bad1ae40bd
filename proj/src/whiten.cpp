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
#include "rkcca/whiten.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace rkcca {

SpanBasis span_basis(const Eigen::Ref<const Matrix>& centered_gram,
                     double rel_tol) {
  const Index n = centered_gram.rows();
  require(n > 0 && centered_gram.cols() == n, "span_basis: square input only");

  // symmetrize to machine precision before solving
  const Matrix sym = 0.5 * (centered_gram + centered_gram.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  require(es.info() == Eigen::Success, "span_basis: eigendecomposition failed");

  const Vector& lambda = es.eigenvalues();  // ascending
  const double cutoff = std::max(lambda[n - 1], 0.0) * rel_tol;

  Index m = 0;
  for (Index i = 0; i < n; ++i)
    if (lambda[i] > cutoff) ++m;
  require(m > 0, "span_basis: centered Gram matrix is numerically zero");

  SpanBasis basis;
  basis.eig.resize(m);
  basis.coef.resize(n, m);
  basis.feat.resize(n, m);
  // keep descending order
  for (Index k = 0; k < m; ++k) {
    const Index src = n - 1 - k;
    const double s = lambda[src];
    const double root = std::sqrt(s);
    basis.eig[k] = s;
    basis.coef.col(k) = es.eigenvectors().col(src) / root;
    basis.feat.col(k) = es.eigenvectors().col(src) * root;
  }
  return basis;
}

namespace {

Matrix sym_apply_shifted(const Eigen::Ref<const Matrix>& A, double shift,
                         double power) {
  require(A.rows() == A.cols(), "sym_apply: square input only");
  require(shift > 0.0, "sym_apply: shift must be positive");
  const Matrix sym = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  require(es.info() == Eigen::Success, "sym_apply: eigendecomposition failed");
  Vector d = es.eigenvalues();
  for (Index i = 0; i < d.size(); ++i)
    d[i] = std::pow(std::max(d[i], 0.0) + shift, power);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Matrix sym_inv_sqrt(const Eigen::Ref<const Matrix>& A, double shift) {
  return sym_apply_shifted(A, shift, -0.5);
}

Matrix sym_inv(const Eigen::Ref<const Matrix>& A, double shift) {
  return sym_apply_shifted(A, shift, -1.0);
}

}  // namespace rkcca
