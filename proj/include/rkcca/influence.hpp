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

#include <memory>
#include <utility>
#include <vector>

#include "rkcca/kcca.hpp"
#include "rkcca/kernels.hpp"
#include "rkcca/types.hpp"

namespace rkcca {

/// Empirical influence function of the kernel mean element for a perturbing
/// point x', evaluated at the n sample points:
///   v_i = k(X_i, x') - (1/n) sum_a k(X_i, X_a).
Vector eif_kernel_me(const Eigen::Ref<const Vector>& x_prime,
                     const Eigen::Ref<const Matrix>& X, const KernelSpec& spec);

/// Empirical influence function of the kernel cross-raw moment at (x', y'):
///   v_i = k_x(X_i,x') k_y(Y_i,y') - (1/n) sum_a k_x(X_i,X_a) k_y(Y_i,Y_a).
Vector eif_cross_raw_moment(const Eigen::Ref<const Vector>& x_prime,
                            const Eigen::Ref<const Vector>& y_prime,
                            const Eigen::Ref<const Matrix>& X,
                            const Eigen::Ref<const Matrix>& Y,
                            const KernelSpec& spec_x, const KernelSpec& spec_y);

/// Empirical influence function of the kernel cross-covariance operator
/// evaluated at the sample pairs (X_i, Y_i): the centered analogue of the
/// cross-raw moment, with row means removed from both factors.
Vector eif_kernel_cco(const Eigen::Ref<const Vector>& x_prime,
                      const Eigen::Ref<const Vector>& y_prime,
                      const Eigen::Ref<const Matrix>& X,
                      const Eigen::Ref<const Matrix>& Y,
                      const KernelSpec& spec_x, const KernelSpec& spec_y);

/// Per-observation influence evaluations of a fitted kernel CCA model for one
/// perturbing point z' = (x', y') and one component j.
///
/// if_rho is the influence of rho_j^2; if_fx / if_fy hold the influence of
/// the canonical variates evaluated at the n sample points. The variate
/// influences follow the sign convention of the canonical pair with positive
/// covariance; their joint sign tracks the same ambiguity as the variates
/// themselves. near_degenerate is set when another squared correlation lies
/// within the deflation tolerance of rho_j^2, in which case the resolvent is
/// computed on the orthogonal complement of the whole degenerate cluster.
struct InfluenceRecord {
  int component = 0;
  double if_rho = 0.0;
  Vector if_fx;
  Vector if_fy;
  bool near_degenerate = false;
};

/// All-subjects influence evaluations (subject i as the perturbing point):
/// row i of if_fx / if_fy holds the evaluations for subject i.
struct IndexInfluence {
  Vector if_rho;
  Matrix if_fx;
  Matrix if_fy;
  bool near_degenerate = false;
};

/// Evaluator for the influence functions of a fitted kernel CCA model.
///
/// Precomputes the whitened decomposition of the model's operators once;
/// evaluations per perturbing point are then matrix-vector products. All
/// operator inverses and inverse square roots are kappa-regularized with the
/// model's kappa, and the resolvent (B - rho_j^2 I)^{-1} is deflated on the
/// eigenspace of component j (tolerance `degen_tol` on squared correlations).
/// Holds a reference to the model, which must outlive the evaluator.
class KccaInfluence {
 public:
  explicit KccaInfluence(const KccaModel& model, double degen_tol = 1e-8);
  ~KccaInfluence();
  KccaInfluence(KccaInfluence&&) noexcept;
  KccaInfluence& operator=(KccaInfluence&&) noexcept;

  /// Influence at an arbitrary point z' = (x', y') given raw data points.
  /// X and Y are the training samples the model was fitted on.
  InfluenceRecord evaluate(const Eigen::Ref<const Matrix>& X,
                           const Eigen::Ref<const Matrix>& Y,
                           const Eigen::Ref<const Vector>& x_prime,
                           const Eigen::Ref<const Vector>& y_prime,
                           int j) const;

  /// Influence of every sample point on itself-included fit (index plot).
  IndexInfluence index_influence(int j) const;

  int components() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot wrapper around KccaInfluence::evaluate.
InfluenceRecord eif_kcca(const KccaModel& model,
                         const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Matrix>& Y,
                         const Eigen::Ref<const Vector>& x_prime,
                         const Eigen::Ref<const Vector>& y_prime, int j);

/// Per-subject influence records in subject order (each subject as z').
std::vector<InfluenceRecord> index_plot_data(const KccaModel& model, int j);

// ---------------------------------------------------------------------------
// Finite-difference Gateaux oracles. Each perturbs the empirical distribution
// to ((1-eps)/n, ..., (1-eps)/n, eps on z') and returns the one-sided
// difference quotient of the statistic. Intended for validation.
// ---------------------------------------------------------------------------

Vector gateaux_kernel_me(const Eigen::Ref<const Vector>& x_prime,
                         const Eigen::Ref<const Matrix>& X,
                         const KernelSpec& spec, double eps);

Vector gateaux_cross_raw_moment(const Eigen::Ref<const Vector>& x_prime,
                                const Eigen::Ref<const Vector>& y_prime,
                                const Eigen::Ref<const Matrix>& X,
                                const Eigen::Ref<const Matrix>& Y,
                                const KernelSpec& spec_x,
                                const KernelSpec& spec_y, double eps);

Vector gateaux_kernel_cco(const Eigen::Ref<const Vector>& x_prime,
                          const Eigen::Ref<const Vector>& y_prime,
                          const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& Y,
                          const KernelSpec& spec_x, const KernelSpec& spec_y,
                          double eps);

/// Difference quotient of rho_j^2 under a weighted refit of classical kernel
/// CCA on the sample extended by z'.
double gateaux_kcca_rho(const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Matrix>& Y,
                        const KernelSpec& spec_x, const KernelSpec& spec_y,
                        const Eigen::Ref<const Vector>& x_prime,
                        const Eigen::Ref<const Vector>& y_prime, double kappa,
                        int j, double eps);

}  // namespace rkcca
