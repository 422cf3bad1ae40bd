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
#include <utility>

#include "rkcca/types.hpp"

namespace rkcca {

/// Per-observation probability weights: nonnegative, summing to one.
///
/// Every weighted estimator in the library (weighted centering, weighted
/// second-moment operators, the IRLS iterations) consumes or produces one of
/// these. The sum constraint is validated on construction; weight vectors
/// produced internally are normalized explicitly, so a violation indicates a
/// caller bug rather than numerical drift.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-10;

  explicit WeightVector(Vector w) : w_(std::move(w)) {
    require(w_.size() > 0, "WeightVector: empty weight vector");
    require((w_.array() >= 0.0).all(), "WeightVector: negative entry");
    require(std::abs(w_.sum() - 1.0) <= kSumTolerance,
            "WeightVector: entries must sum to 1");
  }

  static WeightVector uniform(Index n) {
    require(n > 0, "WeightVector::uniform: n must be positive");
    return WeightVector(Vector::Constant(n, 1.0 / static_cast<double>(n)));
  }

  /// Normalizes a nonnegative vector to sum one. Throws if the sum is zero.
  static WeightVector normalized(const Vector& raw) {
    require(raw.size() > 0, "WeightVector::normalized: empty vector");
    require((raw.array() >= 0.0).all(),
            "WeightVector::normalized: negative entry");
    const double total = raw.sum();
    require(total > 0.0, "WeightVector::normalized: all weights are zero");
    return WeightVector(raw / total);
  }

  Index size() const { return w_.size(); }
  double operator[](Index i) const { return w_[i]; }
  const Vector& values() const { return w_; }

 private:
  Vector w_;
};

}  // namespace rkcca
