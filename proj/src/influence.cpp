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
#include "rkcca/influence.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "rkcca/whiten.hpp"

namespace rkcca {

Vector eif_kernel_me(const Eigen::Ref<const Vector>& x_prime,
                     const Eigen::Ref<const Matrix>& X,
                     const KernelSpec& spec) {
  const GramMatrix K = gram(spec, X);
  const Matrix kx = cross_gram(spec, x_prime.transpose(), X);  // 1 x n
  return kx.transpose() - K.values.rowwise().mean();
}

Vector eif_cross_raw_moment(const Eigen::Ref<const Vector>& x_prime,
                            const Eigen::Ref<const Vector>& y_prime,
                            const Eigen::Ref<const Matrix>& X,
                            const Eigen::Ref<const Matrix>& Y,
                            const KernelSpec& spec_x,
                            const KernelSpec& spec_y) {
  require(X.rows() == Y.rows(), "eif_cross_raw_moment: paired data required");
  const Matrix kx = gram(spec_x, X).values;
  const Matrix ky = gram(spec_y, Y).values;
  const Vector gx = cross_gram(spec_x, x_prime.transpose(), X).transpose();
  const Vector gy = cross_gram(spec_y, y_prime.transpose(), Y).transpose();
  return gx.cwiseProduct(gy) - kx.cwiseProduct(ky).rowwise().mean();
}

Vector eif_kernel_cco(const Eigen::Ref<const Vector>& x_prime,
                      const Eigen::Ref<const Vector>& y_prime,
                      const Eigen::Ref<const Matrix>& X,
                      const Eigen::Ref<const Matrix>& Y,
                      const KernelSpec& spec_x, const KernelSpec& spec_y) {
  require(X.rows() == Y.rows(), "eif_kernel_cco: paired data required");
  const Matrix kx = gram(spec_x, X).values;
  const Matrix ky = gram(spec_y, Y).values;
  const Vector mx = kx.rowwise().mean();
  const Vector my = ky.rowwise().mean();
  const Vector gx = cross_gram(spec_x, x_prime.transpose(), X).transpose();
  const Vector gy = cross_gram(spec_y, y_prime.transpose(), Y).transpose();

  // row-centered products, averaged over the second index
  const Matrix cx = kx.colwise() - mx;
  const Matrix cy = ky.colwise() - my;
  const Vector second = cx.cwiseProduct(cy).rowwise().mean();
  return (gx - mx).cwiseProduct(gy - my) - second;
}

// ---------------------------------------------------------------------------
// KccaInfluence
// ---------------------------------------------------------------------------

struct KccaInfluence::Impl {
  const KccaModel& model;
  double degen_tol;

  CenteredGram cx;
  CenteredGram cy;
  SpanBasis bx;
  SpanBasis by;
  Matrix isq_x, isq_y;  // (A + kappa I)^{-1/2}
  Matrix inv_x, inv_y;  // (A + kappa I)^{-1}
  Matrix a_yx;          // m_y x m_x
  Matrix full_u;        // m_y x m_y left singular vectors of R
  Matrix full_v;        // m_x x m_x right singular vectors of R
  Vector sigma;         // singular values (length min(m_x, m_y))
  Matrix cfx, cfy;      // basis coordinates of the canonical pairs

  Impl(const KccaModel& m, double tol)
      : model(m),
        degen_tol(tol),
        cx(center_weighted(m.gram_x, m.center_wx)),
        cy(center_weighted(m.gram_y, m.center_wy)) {
    bx = span_basis(cx.values);
    by = span_basis(cy.values);
    const auto w = m.op_w.values().asDiagonal();
    const Matrix a_xx = bx.feat.transpose() * w * bx.feat;
    const Matrix a_yy = by.feat.transpose() * w * by.feat;
    a_yx = by.feat.transpose() * w * bx.feat;
    isq_x = sym_inv_sqrt(a_xx, m.kappa);
    isq_y = sym_inv_sqrt(a_yy, m.kappa);
    inv_x = isq_x * isq_x;
    inv_y = isq_y * isq_y;

    const Matrix r = isq_y * a_yx * isq_x;
    Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    require(svd.info() == Eigen::Success, "KccaInfluence: SVD failed");
    full_u = svd.matrixU();
    full_v = svd.matrixV();
    sigma = svd.singularValues();

    const int q = static_cast<int>(sigma.size());
    cfx = isq_x * full_v.leftCols(q);
    cfy = isq_y * full_u.leftCols(q);
  }

  int pairs() const { return static_cast<int>(sigma.size()); }

  // squared singular values, padded with zeros beyond the SVD rank
  double sigma_sq(Index k) const {
    return k < sigma.size() ? sigma[k] * sigma[k] : 0.0;
  }

  /// Under the regularized constraint <f,(S + kappa I)f> = 1 the variance of
  /// a variate is 1 - kappa ||f||^2; the derivative of rho_j^2 picks up the
  /// shortfall of both variates on top of the plain evaluation terms.
  double kappa_shift(int jj) const {
    return model.kappa *
           (cfx.col(jj).squaredNorm() + cfy.col(jj).squaredNorm());
  }

  /// L = (S+kI)^{-1/2} (B - rho_j^2 I)^+ (S+kI)^{-1/2} for one side, with the
  /// inverse deflated on every direction whose sigma^2 falls within degen_tol
  /// of rho_j^2.
  Matrix resolvent(int j, bool x_side, bool* flagged) const {
    const Matrix& basis = x_side ? full_v : full_u;
    const Matrix& isq = x_side ? isq_x : isq_y;
    const Index dim = basis.cols();
    const double target = sigma[j] * sigma[j];
    Vector g(dim);
    int deflated = 0;
    for (Index k = 0; k < dim; ++k) {
      const double s2 = sigma_sq(k);
      if (std::abs(s2 - target) < degen_tol) {
        g[k] = 0.0;
        ++deflated;
      } else {
        g[k] = 1.0 / (s2 - target);
      }
    }
    if (flagged) *flagged = deflated > 1;
    return isq * (basis * g.asDiagonal() * basis.transpose()) * isq;
  }
};

KccaInfluence::KccaInfluence(const KccaModel& model, double degen_tol)
    : impl_(std::make_unique<Impl>(model, degen_tol)) {}

KccaInfluence::~KccaInfluence() = default;
KccaInfluence::KccaInfluence(KccaInfluence&&) noexcept = default;
KccaInfluence& KccaInfluence::operator=(KccaInfluence&&) noexcept = default;

int KccaInfluence::components() const { return impl_->pairs(); }

InfluenceRecord KccaInfluence::evaluate(const Eigen::Ref<const Matrix>& X,
                                        const Eigen::Ref<const Matrix>& Y,
                                        const Eigen::Ref<const Vector>& x_prime,
                                        const Eigen::Ref<const Vector>& y_prime,
                                        int j) const {
  const Impl& e = *impl_;
  require(j >= 1 && j <= e.pairs(), "KccaInfluence: component out of range");
  require(X.rows() == e.model.n() && Y.rows() == e.model.n(),
          "KccaInfluence: training data size mismatch");
  const int jj = j - 1;

  const Matrix kxr = cross_gram(e.model.gram_x.spec, x_prime.transpose(), X);
  const Matrix kyr = cross_gram(e.model.gram_y.spec, y_prime.transpose(), Y);
  const Vector gx =
      center_test(kxr, e.model.gram_x, e.model.center_wx).transpose();
  const Vector gy =
      center_test(kyr, e.model.gram_y, e.model.center_wy).transpose();

  const Vector u = e.bx.coef.transpose() * gx;
  const Vector v = e.by.coef.transpose() * gy;
  const double rho = e.sigma[jj];
  const double beta_x = e.cfx.col(jj).dot(u);
  const double beta_y = e.cfy.col(jj).dot(v);

  InfluenceRecord rec;
  rec.component = j;
  rec.if_rho = -rho * rho * beta_x * beta_x + 2.0 * rho * beta_x * beta_y -
               rho * rho * beta_y * beta_y - rho * rho * e.kappa_shift(jj);

  bool flag_x = false, flag_y = false;
  const Matrix lx = e.resolvent(jj, true, &flag_x);
  const Matrix ly = e.resolvent(jj, false, &flag_y);

  const Vector tx = -rho * (beta_y - rho * beta_x) * (lx * u) -
                    (beta_x - rho * beta_y) *
                        (lx * (e.a_yx.transpose() * (e.inv_y * v))) +
                    0.5 * (1.0 - beta_x * beta_x) * e.cfx.col(jj);
  const Vector ty = -rho * (beta_x - rho * beta_y) * (ly * v) -
                    (beta_y - rho * beta_x) * (ly * (e.a_yx * (e.inv_x * u))) +
                    0.5 * (1.0 - beta_y * beta_y) * e.cfy.col(jj);
  rec.if_fx = e.bx.feat * tx;
  rec.if_fy = e.by.feat * ty;
  rec.near_degenerate = flag_x || flag_y;
  return rec;
}

IndexInfluence KccaInfluence::index_influence(int j) const {
  const Impl& e = *impl_;
  require(j >= 1 && j <= e.pairs(), "KccaInfluence: component out of range");
  const int jj = j - 1;
  const double rho = e.sigma[jj];

  // subject i's centered section has basis coordinates feat.row(i)
  const Vector bfx = e.bx.feat * e.cfx.col(jj);  // f_jX at the sample points
  const Vector bfy = e.by.feat * e.cfy.col(jj);

  IndexInfluence out;
  out.if_rho = (-rho * rho) * bfx.array().square() +
               2.0 * rho * (bfx.array() * bfy.array()) -
               (rho * rho) * bfy.array().square() -
               rho * rho * e.kappa_shift(jj);

  bool flag_x = false, flag_y = false;
  const Matrix lx = e.resolvent(jj, true, &flag_x);
  const Matrix ly = e.resolvent(jj, false, &flag_y);
  out.near_degenerate = flag_x || flag_y;

  const Vector s1x = -rho * (bfy - rho * bfx);
  const Vector s2x = -(bfx - rho * bfy);
  const Vector s3x = 0.5 * (1.0 - bfx.array().square());
  const Vector s1y = -rho * (bfx - rho * bfy);
  const Vector s2y = -(bfy - rho * bfx);
  const Vector s3y = 0.5 * (1.0 - bfy.array().square());

  // subject-coordinate blocks: row i of each product is the corresponding
  // term of the influence for subject i, evaluated at all sample points
  const Matrix txu = (e.bx.feat * lx) * e.bx.feat.transpose();
  const Matrix txv =
      (e.by.feat * (e.inv_y * (e.a_yx * lx))) * e.bx.feat.transpose();
  const Matrix tyv = (e.by.feat * ly) * e.by.feat.transpose();
  const Matrix tyu = (e.bx.feat * (e.inv_x * (e.a_yx.transpose() * ly))) *
                     e.by.feat.transpose();

  out.if_fx = s1x.asDiagonal() * txu + s2x.asDiagonal() * txv +
              s3x * bfx.transpose();
  out.if_fy = s1y.asDiagonal() * tyv + s2y.asDiagonal() * tyu +
              s3y * bfy.transpose();
  return out;
}

InfluenceRecord eif_kcca(const KccaModel& model,
                         const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Matrix>& Y,
                         const Eigen::Ref<const Vector>& x_prime,
                         const Eigen::Ref<const Vector>& y_prime, int j) {
  return KccaInfluence(model).evaluate(X, Y, x_prime, y_prime, j);
}

std::vector<InfluenceRecord> index_plot_data(const KccaModel& model, int j) {
  const KccaInfluence engine(model);
  const IndexInfluence all = engine.index_influence(j);
  const Index n = all.if_rho.size();
  std::vector<InfluenceRecord> records;
  records.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    InfluenceRecord rec;
    rec.component = j;
    rec.if_rho = all.if_rho[i];
    rec.if_fx = all.if_fx.row(i).transpose();
    rec.if_fy = all.if_fy.row(i).transpose();
    rec.near_degenerate = all.near_degenerate;
    records.push_back(std::move(rec));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Finite-difference oracles
// ---------------------------------------------------------------------------

namespace {

Matrix extend_rows(const Eigen::Ref<const Matrix>& X,
                   const Eigen::Ref<const Vector>& extra) {
  require(X.cols() == extra.size(), "oracle: point dimension mismatch");
  Matrix out(X.rows() + 1, X.cols());
  out.topRows(X.rows()) = X;
  out.row(X.rows()) = extra.transpose();
  return out;
}

Vector mixture_weights(Index n, double eps) {
  Vector w = Vector::Constant(n + 1, (1.0 - eps) / static_cast<double>(n));
  w[n] = eps;
  return w;
}

}  // namespace

Vector gateaux_kernel_me(const Eigen::Ref<const Vector>& x_prime,
                         const Eigen::Ref<const Matrix>& X,
                         const KernelSpec& spec, double eps) {
  require(eps > 0.0, "gateaux_kernel_me: eps must be positive");
  const Index n = X.rows();
  const Matrix x_ext = extend_rows(X, x_prime);
  const Matrix k = cross_gram(spec, X, x_ext);  // n x (n+1)
  const Vector w_eps = mixture_weights(n, eps);
  const Vector w_zero = mixture_weights(n, 0.0);
  return (k * w_eps - k * w_zero) / eps;
}

Vector gateaux_cross_raw_moment(const Eigen::Ref<const Vector>& x_prime,
                                const Eigen::Ref<const Vector>& y_prime,
                                const Eigen::Ref<const Matrix>& X,
                                const Eigen::Ref<const Matrix>& Y,
                                const KernelSpec& spec_x,
                                const KernelSpec& spec_y, double eps) {
  require(eps > 0.0, "gateaux_cross_raw_moment: eps must be positive");
  const Index n = X.rows();
  const Matrix kx = cross_gram(spec_x, X, extend_rows(X, x_prime));
  const Matrix ky = cross_gram(spec_y, Y, extend_rows(Y, y_prime));
  const Matrix prod = kx.cwiseProduct(ky);  // n x (n+1)
  const Vector w_eps = mixture_weights(n, eps);
  const Vector w_zero = mixture_weights(n, 0.0);
  return (prod * w_eps - prod * w_zero) / eps;
}

Vector gateaux_kernel_cco(const Eigen::Ref<const Vector>& x_prime,
                          const Eigen::Ref<const Vector>& y_prime,
                          const Eigen::Ref<const Matrix>& X,
                          const Eigen::Ref<const Matrix>& Y,
                          const KernelSpec& spec_x, const KernelSpec& spec_y,
                          double eps) {
  require(eps > 0.0, "gateaux_kernel_cco: eps must be positive");
  const Index n = X.rows();
  const Matrix kx = cross_gram(spec_x, X, extend_rows(X, x_prime));
  const Matrix ky = cross_gram(spec_y, Y, extend_rows(Y, y_prime));

  auto statistic = [&](const Vector& w) -> Vector {
    const Vector mx = kx * w;
    const Vector my = ky * w;
    const Matrix cxw = kx.colwise() - mx;
    const Matrix cyw = ky.colwise() - my;
    return cxw.cwiseProduct(cyw) * w;
  };
  return (statistic(mixture_weights(n, eps)) -
          statistic(mixture_weights(n, 0.0))) /
         eps;
}

double gateaux_kcca_rho(const Eigen::Ref<const Matrix>& X,
                        const Eigen::Ref<const Matrix>& Y,
                        const KernelSpec& spec_x, const KernelSpec& spec_y,
                        const Eigen::Ref<const Vector>& x_prime,
                        const Eigen::Ref<const Vector>& y_prime, double kappa,
                        int j, double eps) {
  require(eps > 0.0, "gateaux_kcca_rho: eps must be positive");
  const Index n = X.rows();
  const GramMatrix kx = gram(spec_x, extend_rows(X, x_prime));
  const GramMatrix ky = gram(spec_y, extend_rows(Y, y_prime));

  auto rho_sq = [&](double mass) -> double {
    const WeightVector w{mixture_weights(n, mass)};
    const KccaModel m = fit_kcca_weighted(kx, ky, w, w, w, kappa, j);
    require(m.components() >= j, "gateaux_kcca_rho: component unavailable");
    return m.rho[j - 1] * m.rho[j - 1];
  };
  return (rho_sq(eps) - rho_sq(0.0)) / eps;
}

}  // namespace rkcca
