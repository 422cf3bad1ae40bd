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

#include "rkcca/robust.hpp"
#include "rkcca/types.hpp"
#include "rkcca/weights.hpp"

namespace rkcca {

/// Matrix norms used by the operator sensitivity ratios:
///   O  maximum absolute column sum
///   F  Frobenius
///   M  maximum modulus of the entries
///   S  spectral (largest singular value)
enum class NormKind { O, F, M, S };

NormKind parse_norm(const std::string& s);
std::string norm_name(NormKind kind);

double matrix_norm(const Eigen::Ref<const Matrix>& A, NormKind kind);

/// Squared tensor-RKHS distance between the sample and population raw
/// second-moment elements,
///   (1/n^2) sum_ij k(X_i,X_j)^2 - (2/(N n)) sum_iJ k(X_i,X_J)^2
///   + (1/N^2) sum_IJ k(X_I,X_J)^2,
/// given the sample Gram (n x n), the sample-population cross Gram (n x N)
/// and the population Gram (N x N).
double eta_kco(const Eigen::Ref<const Matrix>& k_sample,
               const Eigen::Ref<const Matrix>& k_cross,
               const Eigen::Ref<const Matrix>& k_pop);

/// Weighted variant: the sample averages are replaced by w_i w_j and
/// (1/N) sum_J w_i terms. Uniform weights reproduce eta_kco exactly.
double eta_rkco(const Eigen::Ref<const Matrix>& k_sample,
                const Eigen::Ref<const Matrix>& k_cross,
                const Eigen::Ref<const Matrix>& k_pop, const WeightVector& w);

/// Contamination sensitivity of a covariance operator estimator,
///   | 1 - ||C_id|| / ||C_cd|| |
/// in the requested matrix norm of the dual operator matrices. Both operators
/// must be covariance operators over samples of equal size.
double eta_co(const DualOperator& op_id, const DualOperator& op_cd,
              NormKind kind);

/// Sensitivity ratio of influence vectors, | 1 - ||eif_id|| / ||eif_cd|| |.
double eta_rho(const Eigen::Ref<const Vector>& eif_id,
               const Eigen::Ref<const Vector>& eif_cd);

/// Sensitivity ratio of canonical-variate influence arrays,
///   | 1 - ||EIF(f_x)_id - EIF(f_y)_id||_F / ||EIF(f_x)_cd - EIF(f_y)_cd||_F |.
double eta_f(const Eigen::Ref<const Matrix>& fx_id,
             const Eigen::Ref<const Matrix>& fy_id,
             const Eigen::Ref<const Matrix>& fx_cd,
             const Eigen::Ref<const Matrix>& fy_cd);

}  // namespace rkcca
