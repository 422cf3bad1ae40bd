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

#include <cmath>
#include <string>
#include <utility>

#include "rkcca/types.hpp"
#include "rkcca/weights.hpp"

namespace rkcca {

enum class KernelKind { linear, polynomial, gaussian, laplacian };

/// Positive-definite kernel descriptor.
///
/// Conventions:
///   linear      k(x,y) = <x,y>
///   polynomial  k(x,y) = (<x,y> + 1)^degree
///   gaussian    k(x,y) = exp(-||x-y||^2 / (2 sigma^2)), bandwidth = sigma
///   laplacian   k(x,y) = exp(-||x-y||_1 / beta),        bandwidth = beta
struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  int degree = 1;          // polynomial only
  double bandwidth = 1.0;  // gaussian / laplacian only

  static KernelSpec linear() { return {KernelKind::linear, 1, 1.0}; }

  static KernelSpec polynomial(int degree) {
    require(degree >= 1, "KernelSpec: polynomial degree must be >= 1");
    return {KernelKind::polynomial, degree, 1.0};
  }

  static KernelSpec gaussian(double sigma) {
    require(sigma > 0.0 && std::isfinite(sigma),
            "KernelSpec: gaussian bandwidth must be positive");
    return {KernelKind::gaussian, 1, sigma};
  }

  static KernelSpec laplacian(double beta = 1.0) {
    require(beta > 0.0 && std::isfinite(beta),
            "KernelSpec: laplacian bandwidth must be positive");
    return {KernelKind::laplacian, 1, beta};
  }

  bool bounded() const {
    return kind == KernelKind::gaussian || kind == KernelKind::laplacian;
  }

  std::string name() const;
};

/// Evaluates k(x,y) for two points given as Eigen vector expressions.
template <typename DerivedA, typename DerivedB>
double eval_kernel(const KernelSpec& spec, const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y) {
  require(x.size() == y.size(), "eval_kernel: dimension mismatch");
  require(x.allFinite() && y.allFinite(), "eval_kernel: non-finite input");
  switch (spec.kind) {
    case KernelKind::linear:
      return x.dot(y);
    case KernelKind::polynomial:
      return std::pow(x.dot(y) + 1.0, spec.degree);
    case KernelKind::gaussian: {
      const double d2 = (x - y).squaredNorm();
      return std::exp(-d2 / (2.0 * spec.bandwidth * spec.bandwidth));
    }
    case KernelKind::laplacian: {
      const double d1 = (x - y).cwiseAbs().sum();
      return std::exp(-d1 / spec.bandwidth);
    }
  }
  throw std::logic_error("eval_kernel: unknown kernel kind");
}

/// Median of the n(n-1)/2 pairwise Euclidean distances of the rows of X.
/// Throws when all points coincide (the median bandwidth would be zero).
double median_bandwidth(const Eigen::Ref<const Matrix>& X);

/// n x n kernel evaluation matrix together with the kernel that produced it.
struct GramMatrix {
  Matrix values;
  KernelSpec spec;

  Index n() const { return values.rows(); }
};

/// Weighted-centered Gram matrix H K H^T with H = I - 1 w^T, carrying the
/// centering weights. Uniform weights reproduce the usual C K C centering.
struct CenteredGram {
  Matrix values;
  WeightVector weights;

  Index n() const { return values.rows(); }
};

/// Builds the Gram matrix (k(X_i, X_j))_{ij} from the rows of X.
GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& X);

/// Builds the T x n cross evaluation matrix (k(X_test_i, X_j))_{ij}.
Matrix cross_gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& X_test,
                  const Eigen::Ref<const Matrix>& X);

/// H K H^T with H = I - 1 w^T, expanded as
///   K - 1 (w^T K) - (K w) 1^T + (w^T K w) 1 1^T
/// which is the Gram matrix of the features centered at the weighted mean.
CenteredGram center_weighted(const GramMatrix& K, const WeightVector& w);

/// Centers a T x n test evaluation matrix against the training sample:
///   K_test - 1_T (w^T K) - (K_test w) 1_n^T + (w^T K w) 1_T 1_n^T.
/// Row t holds the inner products of the centered test feature with the
/// centered training features, consistent with center_weighted.
Matrix center_test(const Eigen::Ref<const Matrix>& K_test, const GramMatrix& K,
                   const WeightVector& w);

}  // namespace rkcca
