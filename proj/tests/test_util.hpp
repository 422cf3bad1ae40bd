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

#include <random>

#include "rkcca/types.hpp"

namespace rkcca::test {

inline Matrix random_matrix(Index rows, Index cols, std::uint64_t seed,
                            double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, scale);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline Vector random_vector(Index n, std::uint64_t seed, double scale = 1.0) {
  return random_matrix(n, 1, seed, scale).col(0);
}

/// Symmetric PSD matrix A A^T / cols from a random A.
inline Matrix random_psd(Index n, std::uint64_t seed) {
  const Matrix a = random_matrix(n, n + 2, seed);
  return a * a.transpose() / static_cast<double>(n + 2);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace rkcca::test
