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

#include <cmath>

#include "rkcca/kcca.hpp"
#include "rkcca/synthdata.hpp"
#include "test_util.hpp"

using namespace rkcca;

namespace {

// Regularized linear CCA for 1-D raw data under the variance constraint
// a^2 (var + kappa) = 1, the closed-form counterpart of the dual fit with
// linear kernels.
double linear_cca_rho(const Vector& x, const Vector& y, double kappa) {
  const double n = static_cast<double>(x.size());
  const double mx = x.mean();
  const double my = y.mean();
  const double vx = (x.array() - mx).square().sum() / n;
  const double vy = (y.array() - my).square().sum() / n;
  const double cov = ((x.array() - mx) * (y.array() - my)).sum() / n;
  return std::abs(cov) / std::sqrt((vx + kappa) * (vy + kappa));
}

std::pair<GramMatrix, GramMatrix> gaussian_pair(const Matrix& x,
                                                const Matrix& y) {
  return {gram(KernelSpec::gaussian(median_bandwidth(x)), x),
          gram(KernelSpec::gaussian(median_bandwidth(y)), y)};
}

}  // namespace

TEST_CASE("classical_kcca: perfect dependence gives rho ~ 1") {
  const Matrix x = test::random_matrix(40, 3, 2);
  const auto [kx, ky] = gaussian_pair(x, x);
  const KccaModel m = classical_kcca(kx, ky, 1e-5, 2);
  CHECK(m.rho[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(m.rho[0] <= 1.0 + 1e-6);
}

TEST_CASE("classical_kcca: three-point linear kernels match closed-form CCA") {
  Matrix x(3, 1), y(3, 1);
  x << 0.0, 1.0, 2.5;
  y << 1.0, -0.5, 0.7;
  const GramMatrix kx = gram(KernelSpec::linear(), x);
  const GramMatrix ky = gram(KernelSpec::linear(), y);
  const double kappa = 1e-4;
  const KccaModel m = classical_kcca(kx, ky, kappa, 1);
  CHECK(m.rho[0] ==
        doctest::Approx(linear_cca_rho(x.col(0), y.col(0), kappa))
            .epsilon(1e-10));
}

TEST_CASE("classical_kcca: input validation") {
  const Matrix x = test::random_matrix(6, 2, 3);
  const auto [kx, ky] = gaussian_pair(x, x);
  CHECK_THROWS_AS(classical_kcca(kx, ky, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(classical_kcca(kx, ky, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(classical_kcca(kx, ky, 1e-5, 0), std::invalid_argument);
  CHECK_THROWS_AS(classical_kcca(kx, ky, 1e-5, 7), std::invalid_argument);
}

TEST_CASE("classical_kcca: normalization constraint <f,(S+kI)f> = 1") {
  const Dataset d = gen_scsd(60, false, 0.05, 9);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  const double kappa = 1e-5;
  const KccaModel m = classical_kcca(kx, ky, kappa, 3);

  const auto [fx, fy] = training_variates(m);
  const CenteredGram cx = center_weighted(m.gram_x, m.center_wx);
  const CenteredGram cy = center_weighted(m.gram_y, m.center_wy);
  for (int j = 0; j < m.components(); ++j) {
    const double var_x = m.op_w.values().dot(fx.col(j).cwiseProduct(fx.col(j)));
    const double norm_x = m.alpha_x.col(j).dot(cx.values * m.alpha_x.col(j));
    CHECK(var_x + kappa * norm_x == doctest::Approx(1.0).epsilon(1e-6));

    const double var_y = m.op_w.values().dot(fy.col(j).cwiseProduct(fy.col(j)));
    const double norm_y = m.alpha_y.col(j).dot(cy.values * m.alpha_y.col(j));
    CHECK(var_y + kappa * norm_y == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("classical_kcca: swapping views swaps the variates") {
  const Dataset d = gen_mgsd(50, false, 0.05, 21);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  const KccaModel a = classical_kcca(kx, ky, 1e-5, 3);
  const KccaModel b = classical_kcca(ky, kx, 1e-5, 3);
  CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(test::max_abs_diff(a.alpha_x, b.alpha_y) < 1e-6);
  CHECK(test::max_abs_diff(a.alpha_y, b.alpha_x) < 1e-6);
}

TEST_CASE("classical_kcca: rho_1 non-increasing in kappa") {
  const Dataset d = gen_scsd(50, false, 0.05, 33);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  double prev = 2.0;
  for (double kappa : {1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
    const double rho = classical_kcca(kx, ky, kappa, 1).rho[0];
    CHECK(rho <= prev + 1e-12);
    prev = rho;
  }
}

TEST_CASE("classical_kcca: rotation invariance of the gaussian kernel") {
  const Matrix x = test::random_matrix(30, 2, 44);
  const Matrix y = test::random_matrix(30, 2, 45);
  const auto [kx, ky] = gaussian_pair(x, y);
  const KccaModel base = classical_kcca(kx, ky, 1e-5, 2);

  const double theta = 0.7;
  Matrix rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const Matrix xr = x * rot.transpose();
  const auto [kxr, kyr] = gaussian_pair(xr, y);
  const KccaModel rotated = classical_kcca(kxr, kyr, 1e-5, 2);
  CHECK((base.rho - rotated.rho).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("classical_kcca: sign convention and re-run stability") {
  const Dataset d = gen_scsd(40, false, 0.05, 55);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  const KccaModel a = classical_kcca(kx, ky, 1e-5, 3);
  const KccaModel b = classical_kcca(kx, ky, 1e-5, 3);

  CHECK(test::max_abs_diff(a.alpha_x, b.alpha_x) == 0.0);
  CHECK(test::max_abs_diff(a.alpha_y, b.alpha_y) == 0.0);
  CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() == 0.0);

  for (int j = 0; j < a.components(); ++j) {
    const double scale = a.alpha_x.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < a.n(); ++i) {
      if (std::abs(a.alpha_x(i, j)) > 1e-12 * scale) {
        CHECK(a.alpha_x(i, j) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("classical_kcca: independent views, regression baseline") {
  // Monte-Carlo reference: independent gaussians, gaussian kernels,
  // kappa = 1e-5. In-sample canonical correlations are optimistically high
  // at this kappa; the recorded baseline is their decrease with n.
  auto mean_rho = [](int n, std::uint64_t seed0, int reps) {
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      const Matrix x = test::random_matrix(n, 2, seed0 + 2 * r);
      const Matrix y = test::random_matrix(n, 2, seed0 + 2 * r + 1);
      const auto [kx, ky] = gaussian_pair(x, y);
      acc += classical_kcca(kx, ky, 1e-5, 1).rho[0];
    }
    return acc / reps;
  };
  const double rho_small = mean_rho(60, 100, 5);
  const double rho_large = mean_rho(240, 200, 5);
  CHECK(rho_large < rho_small);
  CHECK(rho_large < 1.0);
}

TEST_CASE("robust_kcca: quadratic loss reproduces the classical fit") {
  const Dataset d = gen_mgsd(45, true, 0.1, 71);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  const KccaModel classical = classical_kcca(kx, ky, 1e-5, 3);
  const KccaModel robust = robust_kcca(kx, ky, RobustLoss::quadratic(), 1e-5, 3);

  CHECK((classical.rho - robust.rho).cwiseAbs().maxCoeff() <= 1e-10);
  const auto [cfx, cfy] = training_variates(classical);
  const auto [rfx, rfy] = training_variates(robust);
  CHECK(test::max_abs_diff(cfx, rfx) <= 1e-10);
  CHECK(test::max_abs_diff(cfy, rfy) <= 1e-10);
}

TEST_CASE("robust_kcca: copy view with huber loss keeps rho ~ 1") {
  const Matrix x = test::random_matrix(35, 2, 81);
  const auto [kx, ky] = gaussian_pair(x, x);
  const KccaModel m =
      robust_kcca(kx, ky, RobustLoss::huber_adaptive(), 1e-5, 1);
  CHECK(m.rho[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("robust_kcca: contamination moves robust rho less (SCSD)") {
  int robust_wins = 0;
  const int reps = 10;
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t seed = 1000 + r;
    const Dataset id = gen_scsd(80, false, 0.05, seed);
    const Dataset cd = gen_scsd(80, true, 0.05, seed);

    const auto [kx_id, ky_id] = gaussian_pair(id.X, id.Y);
    const auto [kx_cd, ky_cd] = gaussian_pair(cd.X, cd.Y);

    const double c_id = classical_kcca(kx_id, ky_id, 1e-5, 1).rho[0];
    const double c_cd = classical_kcca(kx_cd, ky_cd, 1e-5, 1).rho[0];
    const RobustLoss loss = RobustLoss::huber_adaptive();
    const double r_id = robust_kcca(kx_id, ky_id, loss, 1e-5, 1).rho[0];
    const double r_cd = robust_kcca(kx_cd, ky_cd, loss, 1e-5, 1).rho[0];

    if (std::abs(r_cd - r_id) <= std::abs(c_cd - c_id)) ++robust_wins;
  }
  CHECK(robust_wins >= reps * 6 / 10);
}

TEST_CASE("canonical_variates") {
  const Dataset d = gen_scsd(40, false, 0.05, 91);
  const auto [kx, ky] = gaussian_pair(d.X, d.Y);
  const KccaModel m = classical_kcca(kx, ky, 1e-5, 2);

  SUBCASE("duplicate evaluation rows give identical variate rows") {
    Matrix x_eval(2, d.X.cols());
    x_eval.row(0) = d.X.row(5);
    x_eval.row(1) = d.X.row(5);
    Matrix y_eval(2, d.Y.cols());
    y_eval.row(0) = d.Y.row(5);
    y_eval.row(1) = d.Y.row(5);
    const auto [fx, fy] =
        canonical_variates(m, cross_gram(m.gram_x.spec, x_eval, d.X),
                           cross_gram(m.gram_y.spec, y_eval, d.Y));
    CHECK(test::max_abs_diff(fx.row(0), fx.row(1)) == 0.0);
    CHECK(test::max_abs_diff(fy.row(0), fy.row(1)) == 0.0);
  }

  SUBCASE("evaluation at training points reproduces training variates") {
    const auto [fx, fy] =
        canonical_variates(m, cross_gram(m.gram_x.spec, d.X, d.X),
                           cross_gram(m.gram_y.spec, d.Y, d.Y));
    const auto [tfx, tfy] = training_variates(m);
    CHECK(test::max_abs_diff(fx, tfx) < 1e-12);
    CHECK(test::max_abs_diff(fy, tfy) < 1e-12);
  }

  SUBCASE("shape mismatch is rejected") {
    const Matrix bad = Matrix::Zero(2, m.n() + 1);
    CHECK_THROWS_AS(canonical_variates(m, bad, bad), std::invalid_argument);
  }
}

TEST_CASE("canonical_variates: linear kernel matches raw-space linear CCA") {
  Matrix x(5, 1), y(5, 1);
  x << 0.2, 1.0, -0.7, 2.0, 0.4;
  y << 1.1, 2.1, -0.2, 3.9, 1.2;
  const GramMatrix kx = gram(KernelSpec::linear(), x);
  const GramMatrix ky = gram(KernelSpec::linear(), y);
  const double kappa = 1e-6;
  const KccaModel m = classical_kcca(kx, ky, kappa, 1);

  CHECK(m.rho[0] ==
        doctest::Approx(linear_cca_rho(x.col(0), y.col(0), kappa))
            .epsilon(1e-8));

  // raw-space projection: f(x) = (x - mean) / sqrt(var + kappa)
  const double n = 5.0;
  const double mx = x.mean();
  const double vx = (x.array() - mx).square().sum() / n;
  const Vector expected = (x.array() - mx) / std::sqrt(vx + kappa);
  const Vector got = training_variates(m).first.col(0);
  const double flip = expected.dot(got) >= 0 ? 1.0 : -1.0;
  CHECK((flip * got - expected).cwiseAbs().maxCoeff() < 1e-6);
}
