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
#include "rkcca/kernels.hpp"

#include <algorithm>
#include <vector>

namespace rkcca {

std::string KernelSpec::name() const {
  switch (kind) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::polynomial:
      return "poly" + std::to_string(degree);
    case KernelKind::gaussian:
      return "gaussian";
    case KernelKind::laplacian:
      return "laplacian";
  }
  return "unknown";
}

double median_bandwidth(const Eigen::Ref<const Matrix>& X) {
  const Index n = X.rows();
  require(n >= 2, "median_bandwidth: need at least two points");
  require(X.allFinite(), "median_bandwidth: non-finite input");

  std::vector<double> dists;
  dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      dists.push_back((X.row(i) - X.row(j)).norm());

  const size_t m = dists.size();
  auto mid = dists.begin() + m / 2;
  std::nth_element(dists.begin(), mid, dists.end());
  double med = *mid;
  if (m % 2 == 0) {
    // even count: average the two middle order statistics
    double lo = *std::max_element(dists.begin(), mid);
    med = 0.5 * (lo + med);
  }
  require(med > 0.0, "median_bandwidth: all points identical");
  return med;
}

GramMatrix gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& X) {
  const Index n = X.rows();
  require(n > 0, "gram: empty data");
  Matrix K(n, n);
  for (Index i = 0; i < n; ++i) {
    K(i, i) = eval_kernel(spec, X.row(i), X.row(i));
    for (Index j = i + 1; j < n; ++j) {
      const double v = eval_kernel(spec, X.row(i), X.row(j));
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  require(K.allFinite(), "gram: non-finite kernel value");
  return GramMatrix{std::move(K), spec};
}

Matrix cross_gram(const KernelSpec& spec, const Eigen::Ref<const Matrix>& X_test,
                  const Eigen::Ref<const Matrix>& X) {
  require(X_test.cols() == X.cols(), "cross_gram: dimension mismatch");
  Matrix K(X_test.rows(), X.rows());
  for (Index t = 0; t < X_test.rows(); ++t)
    for (Index j = 0; j < X.rows(); ++j)
      K(t, j) = eval_kernel(spec, X_test.row(t), X.row(j));
  require(K.allFinite(), "cross_gram: non-finite kernel value");
  return K;
}

CenteredGram center_weighted(const GramMatrix& K, const WeightVector& w) {
  require(w.size() == K.n(), "center_weighted: weight length mismatch");
  const Vector Kw = K.values * w.values();
  const double wKw = w.values().dot(Kw);
  Matrix C = K.values;
  C.rowwise() -= Kw.transpose();
  C.colwise() -= Kw;
  C.array() += wKw;
  return CenteredGram{std::move(C), w};
}

Matrix center_test(const Eigen::Ref<const Matrix>& K_test, const GramMatrix& K,
                   const WeightVector& w) {
  require(K_test.cols() == K.n(), "center_test: shape mismatch");
  require(w.size() == K.n(), "center_test: weight length mismatch");
  const Vector Kw = K.values * w.values();
  const double wKw = w.values().dot(Kw);
  Matrix C = K_test;
  C.rowwise() -= Kw.transpose();
  C.colwise() -= (K_test * w.values()).eval();
  C.array() += wKw;
  return C;
}

}  // namespace rkcca
