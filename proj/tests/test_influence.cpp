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

#include <algorithm>
#include <cmath>

#include "rkcca/influence.hpp"
#include "rkcca/kcca.hpp"
#include "rkcca/synthdata.hpp"
#include "test_util.hpp"

using namespace rkcca;

TEST_CASE("eif_kernel_me") {
  SUBCASE("constant kernel values give the zero vector") {
    const Matrix x = Matrix::Zero(6, 2);  // linear kernel: k = 0 everywhere
    const Vector v = eif_kernel_me(Vector::Zero(2), x, KernelSpec::linear());
    CHECK(v.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("hand computation, linear kernel, X = {0, 2}, x' = 1") {
    Matrix x(2, 1);
    x << 0.0, 2.0;
    Vector xp(1);
    xp << 1.0;
    const Vector v = eif_kernel_me(xp, x, KernelSpec::linear());
    CHECK(v[0] == doctest::Approx(0.0));
    CHECK(v[1] == doctest::Approx(0.0));
  }

  SUBCASE("matches the finite-difference oracle exactly (linear statistic)") {
    const Matrix x = test::random_matrix(50, 2, 7);
    const Vector xp = test::random_vector(2, 8);
    const KernelSpec spec = KernelSpec::gaussian(median_bandwidth(x));
    const Vector analytic = eif_kernel_me(xp, x, spec);
    const Vector fd = gateaux_kernel_me(xp, x, spec, 1e-6);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5);
  }

  SUBCASE("empirical influence sums to zero over the sample") {
    const Matrix x = test::random_matrix(25, 3, 9);
    const KernelSpec spec = KernelSpec::gaussian(1.0);
    Vector total = Vector::Zero(25);
    for (Index a = 0; a < 25; ++a)
      total += eif_kernel_me(x.row(a).transpose(), x, spec);
    CHECK(total.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("eif_kernel_me boundedness dichotomy") {
  const Matrix x = test::random_matrix(30, 2, 11);

  SUBCASE("gaussian kernel: bounded by 2 over a probe grid") {
    const KernelSpec spec = KernelSpec::gaussian(median_bandwidth(x));
    double worst = 0.0;
    for (int g = 0; g < 100; ++g) {
      const Vector xp = test::random_vector(2, 1000 + g, 50.0);
      worst =
          std::max(worst, eif_kernel_me(xp, x, spec).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 2.0);
  }

  SUBCASE("linear kernel: probe maximum grows without bound") {
    const KernelSpec spec = KernelSpec::linear();
    double prev = 0.0;
    for (double radius : {10.0, 100.0, 1000.0}) {
      double worst = 0.0;
      for (int g = 0; g < 50; ++g) {
        Vector xp = test::random_vector(2, 2000 + g);
        xp *= radius / xp.norm();
        worst =
            std::max(worst, eif_kernel_me(xp, x, spec).cwiseAbs().maxCoeff());
      }
      CHECK(worst > prev);
      prev = worst;
    }
  }
}

TEST_CASE("eif_cross_raw_moment") {
  const Matrix x = test::random_matrix(3, 1, 13);
  const Matrix y = test::random_matrix(3, 1, 14);
  const KernelSpec lin = KernelSpec::linear();

  SUBCASE("toy n = 3 against the direct formula") {
    Vector xp(1), yp(1);
    xp << 0.4;
    yp << -0.2;
    const Vector got = eif_cross_raw_moment(xp, yp, x, y, lin, lin);
    for (Index i = 0; i < 3; ++i) {
      double second = 0.0;
      for (Index a = 0; a < 3; ++a)
        second += (x(i, 0) * x(a, 0)) * (y(i, 0) * y(a, 0));
      const double expected =
          (x(i, 0) * xp[0]) * (y(i, 0) * yp[0]) - second / 3.0;
      CHECK(got[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("Y = X with identical kernels equals the squared-kernel path") {
    const Vector xp = test::random_vector(1, 15);
    const KernelSpec spec = KernelSpec::gaussian(1.0);
    const Vector a = eif_cross_raw_moment(xp, xp, x, x, spec, spec);
    const Matrix k = gram(spec, x).values;
    const Vector g = cross_gram(spec, xp.transpose(), x).transpose();
    const Vector b = g.cwiseProduct(g) - k.cwiseProduct(k).rowwise().mean();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("matches the finite-difference oracle (linear statistic)") {
    const Matrix xs = test::random_matrix(50, 2, 16);
    const Matrix ys = test::random_matrix(50, 3, 17);
    const Vector xp = test::random_vector(2, 18);
    const Vector yp = test::random_vector(3, 19);
    const KernelSpec sx = KernelSpec::gaussian(median_bandwidth(xs));
    const KernelSpec sy = KernelSpec::gaussian(median_bandwidth(ys));
    const Vector analytic = eif_cross_raw_moment(xp, yp, xs, ys, sx, sy);
    const Vector fd = gateaux_cross_raw_moment(xp, yp, xs, ys, sx, sy, 1e-6);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5);
  }
}

TEST_CASE("eif_kernel_cco") {
  const Matrix x = test::random_matrix(40, 2, 21);
  const Matrix y = test::random_matrix(40, 2, 22);
  const KernelSpec sx = KernelSpec::gaussian(median_bandwidth(x));
  const KernelSpec sy = KernelSpec::gaussian(median_bandwidth(y));
  const Vector xp = test::random_vector(2, 23);
  const Vector yp = test::random_vector(2, 24);

  SUBCASE("direct centered-product computation at a sample z'") {
    const Vector got = eif_kernel_cco(x.row(3).transpose(),
                                      y.row(3).transpose(), x, y, sx, sy);
    const Matrix kx = gram(sx, x).values;
    const Matrix ky = gram(sy, y).values;
    for (Index i : {Index(0), Index(7), Index(19)}) {
      const double mx = kx.row(i).mean();
      const double my = ky.row(i).mean();
      double second = 0.0;
      for (Index d = 0; d < 40; ++d)
        second += (kx(i, d) - mx) * (ky(i, d) - my);
      const double expected = (kx(i, 3) - mx) * (ky(i, 3) - my) - second / 40.0;
      CHECK(got[i] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("matches the finite-difference oracle at eps = 1e-6") {
    const Vector analytic = eif_kernel_cco(xp, yp, x, y, sx, sy);
    const Vector fd = gateaux_kernel_cco(xp, yp, x, y, sx, sy, 1e-6);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5);
  }

  SUBCASE("oracle is Richardson-consistent across eps") {
    const Vector f5 = gateaux_kernel_cco(xp, yp, x, y, sx, sy, 1e-5);
    const Vector f6 = gateaux_kernel_cco(xp, yp, x, y, sx, sy, 1e-6);
    // the quotient error is linear in eps for this quadratic statistic
    CHECK((f5 - f6).cwiseAbs().maxCoeff() < 1e-4);
  }
}

TEST_CASE("gateaux oracles validate eps") {
  const Matrix x = test::random_matrix(5, 1, 25);
  CHECK_THROWS_AS(
      gateaux_kernel_me(Vector::Zero(1), x, KernelSpec::linear(), 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      gateaux_kernel_me(Vector::Zero(1), x, KernelSpec::linear(), -1e-3),
      std::invalid_argument);
}

TEST_CASE("eif_kcca: exact zero correlation zeroes the rho influence") {
  Matrix x(3, 1), y(3, 1);
  x << -1.0, 0.0, 1.0;
  y << 1.0, 0.0, 1.0;  // empirical covariance with x is exactly zero
  const GramMatrix kx = gram(KernelSpec::linear(), x);
  const GramMatrix ky = gram(KernelSpec::linear(), y);
  const KccaModel m = classical_kcca(kx, ky, 1e-5, 1);
  REQUIRE(m.rho[0] == doctest::Approx(0.0).epsilon(1e-12));

  Vector xp(1), yp(1);
  xp << 0.7;
  yp << -0.3;
  const InfluenceRecord rec = eif_kcca(m, x, y, xp, yp, 1);
  CHECK(rec.if_rho == doctest::Approx(0.0));
}

TEST_CASE("eif_kcca: copied views behave like the rho = 1 limit") {
  const Matrix x = test::random_matrix(30, 2, 31);
  const KernelSpec spec = KernelSpec::gaussian(median_bandwidth(x));
  const GramMatrix kx = gram(spec, x);
  const KccaModel m = classical_kcca(kx, kx, 1e-5, 1);
  REQUIRE(m.rho[0] > 0.999);

  const Vector xp = test::random_vector(2, 32);
  const InfluenceRecord rec = eif_kcca(m, x, x, xp, xp, 1);

  // at rho = 1 the influence reduces to -(fx(x') - fy(y'))^2; identical
  // views make the difference vanish, so the value sits near zero
  CHECK(std::abs(rec.if_rho) < 1e-2);
}

TEST_CASE("eif_kcca: rho influence matches the weighted-refit oracle") {
  const Dataset d = gen_scsd(100, false, 0.05, 42);
  const KernelSpec sx = KernelSpec::gaussian(median_bandwidth(d.X));
  const KernelSpec sy = KernelSpec::gaussian(median_bandwidth(d.Y));
  const GramMatrix kx = gram(sx, d.X);
  const GramMatrix ky = gram(sy, d.Y);
  const double kappa = 1e-5;
  const KccaModel m = classical_kcca(kx, ky, kappa, 1);
  const KccaInfluence engine(m);

  for (Index subject : {Index(4), Index(57)}) {
    const Vector xp = d.X.row(subject).transpose();
    const Vector yp = d.Y.row(subject).transpose();
    const InfluenceRecord rec = engine.evaluate(d.X, d.Y, xp, yp, 1);
    const double fd =
        gateaux_kcca_rho(d.X, d.Y, sx, sy, xp, yp, kappa, 1, 1e-4);
    CAPTURE(subject);
    CHECK(std::abs(rec.if_rho - fd) <= 0.05 * std::abs(fd));
  }
}

TEST_CASE("index_plot_data") {
  const Dataset d = gen_scsd(30, false, 0.05, 51);
  const auto kx = gram(KernelSpec::gaussian(median_bandwidth(d.X)), d.X);
  const auto ky = gram(KernelSpec::gaussian(median_bandwidth(d.Y)), d.Y);
  const KccaModel m = classical_kcca(kx, ky, 1e-5, 1);

  const auto records = index_plot_data(m, 1);
  CHECK(records.size() == 30);

  SUBCASE("matches per-point evaluation") {
    const KccaInfluence engine(m);
    for (Index i : {Index(0), Index(12), Index(29)}) {
      const InfluenceRecord one = engine.evaluate(
          d.X, d.Y, d.X.row(i).transpose(), d.Y.row(i).transpose(), 1);
      CHECK(records[static_cast<size_t>(i)].if_rho ==
            doctest::Approx(one.if_rho).epsilon(1e-8));
      CHECK((records[static_cast<size_t>(i)].if_fx - one.if_fx)
                .cwiseAbs()
                .maxCoeff() < 1e-8);
      CHECK((records[static_cast<size_t>(i)].if_fy - one.if_fy)
                .cwiseAbs()
                .maxCoeff() < 1e-8);
    }
  }

  SUBCASE("duplicated subjects give identical values") {
    Matrix x2 = d.X;
    Matrix y2 = d.Y;
    x2.row(7) = x2.row(3);
    y2.row(7) = y2.row(3);
    const auto kx2 = gram(KernelSpec::gaussian(median_bandwidth(x2)), x2);
    const auto ky2 = gram(KernelSpec::gaussian(median_bandwidth(y2)), y2);
    const KccaModel m2 = classical_kcca(kx2, ky2, 1e-5, 1);
    const auto recs = index_plot_data(m2, 1);
    CHECK(recs[3].if_rho == doctest::Approx(recs[7].if_rho).epsilon(1e-10));
  }
}

TEST_CASE("eif_kcca: gross outlier dominates the classical index plot") {
  int hits = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const Dataset cd = gen_scsd(60, true, 0.05, 300 + r);
    const auto kx = gram(KernelSpec::gaussian(median_bandwidth(cd.X)), cd.X);
    const auto ky = gram(KernelSpec::gaussian(median_bandwidth(cd.Y)), cd.Y);
    const KccaModel m = classical_kcca(kx, ky, 1e-5, 1);
    const IndexInfluence idx = KccaInfluence(m).index_influence(1);

    Index argmax = 0;
    idx.if_rho.cwiseAbs().maxCoeff(&argmax);
    const auto& bad = cd.contaminated_indices;
    if (std::find(bad.begin(), bad.end(), argmax) != bad.end()) ++hits;
  }
  CHECK(hits >= 9);
}
