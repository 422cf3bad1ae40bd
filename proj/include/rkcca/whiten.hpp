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

#include "rkcca/types.hpp"

namespace rkcca {

/// Orthonormal basis of the span of the centered feature vectors, obtained
/// from the eigendecomposition K~ = U S U^T (eigenvalues below
/// rel_tol * max(S) are dropped).
///
///   coef  n x m  dual coefficients of the basis functions, U S^{-1/2}
///   feat  n x m  evaluations <Phi_c(X_i), e_k> = U S^{1/2}
///
/// Any RKHS element in the span is a coordinate vector z in this basis; its
/// dual coefficients are coef * z and its evaluations at the training points
/// are feat * z. Second-moment operators restricted to the span become plain
/// m x m symmetric matrices.
struct SpanBasis {
  Matrix coef;
  Matrix feat;
  Vector eig;

  Index rank() const { return eig.size(); }
};

SpanBasis span_basis(const Eigen::Ref<const Matrix>& centered_gram,
                     double rel_tol = 1e-12);

/// (A + shift I)^{-1/2} of a symmetric PSD matrix via eigendecomposition.
Matrix sym_inv_sqrt(const Eigen::Ref<const Matrix>& A, double shift);

/// (A + shift I)^{-1} of a symmetric PSD matrix via eigendecomposition.
Matrix sym_inv(const Eigen::Ref<const Matrix>& A, double shift);

}  // namespace rkcca
