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
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "rkcca/kernels.hpp"
#include "test_util.hpp"

using namespace rkcca;

TEST_CASE("eval_kernel basic values") {
  Vector x(2), y(2);

  x << 1, 2;
  y << 3, 4;
  CHECK(eval_kernel(KernelSpec::linear(), x, y) == doctest::Approx(11.0));

  x << 1, 0;
  y << 1, 0;
  CHECK(eval_kernel(KernelSpec::polynomial(2), x, y) == doctest::Approx(4.0));

  CHECK(eval_kernel(KernelSpec::gaussian(1.0), x, x) == doctest::Approx(1.0));
  CHECK(eval_kernel(KernelSpec::laplacian(1.0), x, x) == doctest::Approx(1.0));

  y << 0, 1;
  const double g = eval_kernel(KernelSpec::gaussian(2.0), x, y);
  CHECK(g == doctest::Approx(std::exp(-2.0 / 8.0)));
  const double l = eval_kernel(KernelSpec::laplacian(0.5), x, y);
  CHECK(l == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("eval_kernel input validation") {
  Vector x(2), y(3);
  x << 1, 2;
  y << 1, 2, 3;
  CHECK_THROWS_AS(eval_kernel(KernelSpec::linear(), x, y),
                  std::invalid_argument);

  Vector bad(2);
  bad << std::nan(""), 0.0;
  Vector ok(2);
  ok << 0, 0;
  CHECK_THROWS_AS(eval_kernel(KernelSpec::gaussian(1.0), bad, ok),
                  std::invalid_argument);
}

TEST_CASE("KernelSpec validation") {
  CHECK_THROWS_AS(KernelSpec::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::gaussian(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::laplacian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelSpec::polynomial(0), std::invalid_argument);
}

TEST_CASE("median_bandwidth") {
  Matrix two(2, 1);
  two << 0, 1;
  CHECK(median_bandwidth(two) == doctest::Approx(1.0));

  Matrix three(3, 1);
  three << 0, 1, 3;  // distances {1, 2, 3}
  CHECK(median_bandwidth(three) == doctest::Approx(2.0));

  Matrix four(4, 1);
  four << 0, 1, 3, 3.5;  // distances {1, 3, 3.5, 2, 2.5, 0.5} -> median 2.25
  CHECK(median_bandwidth(four) == doctest::Approx(2.25));

  Matrix identical = Matrix::Zero(3, 2);
  CHECK_THROWS_AS(median_bandwidth(identical), std::invalid_argument);
}

TEST_CASE("gram and cross_gram") {
  SUBCASE("two identical points, gaussian") {
    Matrix x(2, 1);
    x << 0.5, 0.5;
    const GramMatrix k = gram(KernelSpec::gaussian(1.0), x);
    CHECK(test::max_abs_diff(k.values, Matrix::Ones(2, 2)) < 1e-15);
  }

  SUBCASE("linear kernel on orthonormal rows") {
    const Matrix x = Matrix::Identity(2, 2);
    const GramMatrix k = gram(KernelSpec::linear(), x);
    CHECK(test::max_abs_diff(k.values, Matrix::Identity(2, 2)) < 1e-15);
  }

  SUBCASE("cross_gram against the same sample reproduces gram") {
    const Matrix x = test::random_matrix(7, 3, 11);
    const KernelSpec spec = KernelSpec::gaussian(1.3);
    CHECK(test::max_abs_diff(cross_gram(spec, x, x), gram(spec, x).values) ==
          0.0);
  }
}

TEST_CASE("gram invariants across kernels") {
  const Matrix x = test::random_matrix(20, 4, 5);
  for (const KernelSpec& spec :
       {KernelSpec::linear(), KernelSpec::polynomial(2),
        KernelSpec::polynomial(3), KernelSpec::gaussian(1.7),
        KernelSpec::laplacian(1.0)}) {
    const GramMatrix k = gram(spec, x);
    CAPTURE(spec.name());

    // symmetry
    const double scale = k.values.cwiseAbs().maxCoeff();
    CHECK(test::max_abs_diff(k.values, k.values.transpose()) <= 1e-12 * scale);

    // PSD within tolerance
    Eigen::SelfAdjointEigenSolver<Matrix> es(k.values);
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-8 * std::max(es.eigenvalues().maxCoeff(), 1.0));

    if (spec.bounded()) {
      CHECK(k.values.maxCoeff() <= 1.0 + 1e-15);
      CHECK(k.values.minCoeff() > 0.0);
      CHECK(test::max_abs_diff(k.values.diagonal(), Vector::Ones(20)) <
            1e-15);
    }
  }
}

TEST_CASE("center_weighted") {
  const Matrix x = test::random_matrix(9, 2, 17);
  const GramMatrix k = gram(KernelSpec::gaussian(0.8), x);
  const Index n = k.n();

  SUBCASE("uniform weights reproduce C K C") {
    const Matrix c = Matrix::Identity(n, n) -
                     Matrix::Constant(n, n, 1.0 / static_cast<double>(n));
    const Matrix expected = c * k.values * c;
    const CenteredGram got = center_weighted(k, WeightVector::uniform(n));
    CHECK(test::max_abs_diff(got.values, expected) < 1e-12);

    // row sums vanish
    CHECK(got.values.rowwise().sum().cwiseAbs().maxCoeff() <=
          1e-8 * static_cast<double>(n) * k.values.cwiseAbs().maxCoeff());
  }

  SUBCASE("all mass on one point zeroes its row and column") {
    Vector w = Vector::Zero(n);
    w[0] = 1.0;
    const CenteredGram got = center_weighted(k, WeightVector(w));
    CHECK(got.values.row(0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(got.values.col(0).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("constant kernel centers to zero for any valid weights") {
    const GramMatrix constant{Matrix::Constant(5, 5, 3.2), KernelSpec::linear()};
    Vector w(5);
    w << 0.1, 0.2, 0.3, 0.25, 0.15;
    const CenteredGram got = center_weighted(constant, WeightVector(w));
    CHECK(got.values.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("weight-sum violation is rejected") {
    Vector w = Vector::Constant(n, 0.9 / static_cast<double>(n));
    CHECK_THROWS_AS(center_weighted(k, WeightVector(w)),
                    std::invalid_argument);
  }

  SUBCASE("PSD preservation under random weights") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      Vector raw(n);
      for (Index i = 0; i < n; ++i) raw[i] = unif(rng);
      const CenteredGram got = center_weighted(k, WeightVector::normalized(raw));
      Eigen::SelfAdjointEigenSolver<Matrix> es(got.values);
      CHECK(es.eigenvalues().minCoeff() >=
            -1e-8 * std::max(es.eigenvalues().maxCoeff(), 1e-30));
    }
  }

  SUBCASE("uniform centering is idempotent") {
    const WeightVector u = WeightVector::uniform(n);
    const CenteredGram once = center_weighted(k, u);
    const CenteredGram twice =
        center_weighted(GramMatrix{once.values, k.spec}, u);
    CHECK(test::max_abs_diff(once.values, twice.values) < 1e-10);
  }
}

TEST_CASE("center_test") {
  const Matrix x = test::random_matrix(8, 3, 23);
  const GramMatrix k = gram(KernelSpec::gaussian(1.1), x);
  const WeightVector u = WeightVector::uniform(k.n());

  SUBCASE("training points as test points reproduce center_weighted") {
    const Matrix got = center_test(k.values, k, u);
    CHECK(test::max_abs_diff(got, center_weighted(k, u).values) < 1e-12);
  }

  SUBCASE("constant kernel gives the zero matrix") {
    const GramMatrix constant{Matrix::Constant(6, 6, 2.0), KernelSpec::linear()};
    const Matrix k_test = Matrix::Constant(3, 6, 2.0);
    const Matrix got =
        center_test(k_test, constant, WeightVector::uniform(6));
    CHECK(got.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("single test point equal to training point i gives row i") {
    const Matrix row = k.values.row(2);
    const Matrix got = center_test(row, k, u);
    CHECK(test::max_abs_diff(got.row(0), center_weighted(k, u).values.row(2)) <
          1e-12);
  }

  SUBCASE("shape mismatch is rejected") {
    const Matrix bad = Matrix::Zero(2, k.n() + 1);
    CHECK_THROWS_AS(center_test(bad, k, u), std::invalid_argument);
  }
}
