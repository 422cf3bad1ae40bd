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
#include "rkcca/robust.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <vector>

namespace rkcca {

namespace {

double median_of(Vector v) {
  const Index n = v.size();
  auto mid = v.data() + n / 2;
  std::nth_element(v.data(), mid, v.data() + n);
  double med = *mid;
  if (n % 2 == 0) {
    double lo = *std::max_element(v.data(), mid);
    med = 0.5 * (lo + med);
  }
  return med;
}

}  // namespace

RobustLoss RobustLoss::resolved(double scale) const {
  if (!adaptive) return *this;
  RobustLoss out = *this;
  out.adaptive = false;
  if (kind == LossKind::huber) {
    out.c = scale;
  } else if (kind == LossKind::hampel) {
    out.c1 = scale;
    out.c2 = 2.0 * scale;
    out.c3 = 4.0 * scale;
  }
  return out;
}

double RobustLoss::value(double t) const {
  require(t >= 0.0, "RobustLoss::value: t must be nonnegative");
  switch (kind) {
    case LossKind::quadratic:
      return 0.5 * t * t;
    case LossKind::huber:
      if (t <= c) return 0.5 * t * t;
      return c * t - 0.5 * c * c;
    case LossKind::hampel:
      if (t < c1) return 0.5 * t * t;
      if (t < c2) return c1 * t - 0.5 * c1 * c1;
      if (t < c3) {
        // descending branch; continuous with the linear branch at c2
        const double q = (c3 > c2) ? (t - c3) * (t - c3) / (2.0 * (c2 - c3)) : 0.0;
        return c1 * q + 0.5 * c1 * (c2 + c3 - c1);
      }
      return 0.5 * c1 * (c2 + c3 - c1);
  }
  throw std::logic_error("RobustLoss::value: unknown loss kind");
}

double RobustLoss::deriv(double t) const {
  require(t >= 0.0, "RobustLoss::deriv: t must be nonnegative");
  switch (kind) {
    case LossKind::quadratic:
      return t;
    case LossKind::huber:
      return t <= c ? t : c;
    case LossKind::hampel:
      if (t < c1) return t;
      if (t < c2) return c1;
      if (t < c3) return (c3 > c2) ? c1 * (c3 - t) / (c3 - c2) : 0.0;
      return 0.0;
  }
  throw std::logic_error("RobustLoss::deriv: unknown loss kind");
}

double RobustLoss::weight(double t) const {
  require(t >= 0.0, "RobustLoss::weight: t must be nonnegative");
  if (t == 0.0) return 1.0;  // continuous limit of zeta'(t)/t
  switch (kind) {
    case LossKind::quadratic:
      return 1.0;
    case LossKind::huber:
      return t <= c ? 1.0 : c / t;
    case LossKind::hampel:
      if (t < c1) return 1.0;
      if (t < c2) return c1 / t;
      if (t < c3) return (c3 > c2) ? c1 * (c3 - t) / (t * (c3 - c2)) : 0.0;
      return 0.0;
  }
  throw std::logic_error("RobustLoss::weight: unknown loss kind");
}

std::string RobustLoss::name() const {
  switch (kind) {
    case LossKind::quadratic:
      return "quadratic";
    case LossKind::huber:
      return "huber";
    case LossKind::hampel:
      return "hampel";
  }
  return "unknown";
}

double loss_weight(const RobustLoss& loss, double t) {
  require(!loss.adaptive,
          "loss_weight: adaptive loss must be resolved against residuals");
  return loss.weight(t);
}

KirwlsResult kirwls(const Eigen::Ref<const Matrix>& M, const RobustLoss& loss,
                    double threshold, int max_iter) {
  const Index n = M.rows();
  require(n > 0 && M.cols() == n, "kirwls: M must be square and nonempty");
  require(max_iter >= 1, "kirwls: max_iter must be >= 1");
  require(threshold > 0.0, "kirwls: threshold must be positive");

  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Vector eps(n);
  std::vector<double> trace;
  trace.reserve(static_cast<size_t>(max_iter) + 1);
  RobustLoss active = loss;
  double scale = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;

  for (int h = 0; h <= max_iter; ++h) {
    const Vector Mw = M * w;
    const double wMw = w.dot(Mw);
    eps = (M.diagonal().array() - 2.0 * Mw.array() + wMw).max(0.0).sqrt();

    // adaptive constants follow the median of the current residuals but never
    // increase; since zeta is pointwise non-decreasing in the scale, the
    // recorded objective still descends through every rescale
    if (loss.adaptive) {
      scale = std::min(scale, median_of(eps));
      active = loss.resolved(scale);
    }

    double J = 0.0;
    for (Index i = 0; i < n; ++i) J += active.value(eps[i]);
    J /= static_cast<double>(n);
    trace.push_back(J);

    if (h > 0) {
      const double prev = trace[trace.size() - 2];
      const double rel =
          prev > 0.0 ? std::abs(J - prev) / prev : std::abs(J - prev);
      if (rel < threshold) {
        converged = true;
        break;
      }
    }
    if (h == max_iter) break;

    Vector phi(n);
    for (Index i = 0; i < n; ++i) phi[i] = active.weight(eps[i]);
    const double total = phi.sum();
    if (total <= 0.0)
      throw std::runtime_error("kirwls: all observations rejected by the loss");
    w = phi / total;
    ++iterations;
  }

  return KirwlsResult{WeightVector(std::move(w)), std::move(trace),
                      std::move(eps), active, iterations, converged};
}

KirwlsResult kirwls_mean(const GramMatrix& K, const RobustLoss& loss,
                         double threshold, int max_iter) {
  return kirwls(K.values, loss, threshold, max_iter);
}

std::pair<CenteredGram, WeightVector> robust_center(const GramMatrix& K,
                                                    const RobustLoss& loss,
                                                    double threshold,
                                                    int max_iter) {
  KirwlsResult r = kirwls_mean(K, loss, threshold, max_iter);
  CenteredGram centered = center_weighted(K, r.weights);
  return {std::move(centered), std::move(r.weights)};
}

Matrix DualOperator::dual_matrix() const {
  require(covariance,
          "DualOperator::dual_matrix: defined for covariance operators only");
  const Vector s = weights.values().array().sqrt();
  return s.asDiagonal() * gram_x.values * s.asDiagonal();
}

std::pair<DualOperator, KirwlsResult> kirwls_cco(const CenteredGram& kx,
                                                 const CenteredGram& ky,
                                                 const RobustLoss& loss,
                                                 double threshold,
                                                 int max_iter) {
  require(kx.n() == ky.n(), "kirwls_cco: sample size mismatch");
  const Matrix M = kx.values.cwiseProduct(ky.values);
  KirwlsResult r = kirwls(M, loss, threshold, max_iter);
  const bool same = &kx == &ky || kx.values.data() == ky.values.data();
  DualOperator op{r.weights, kx, ky, same};
  return {std::move(op), std::move(r)};
}

std::pair<DualOperator, KirwlsResult> kirwls_cov(const CenteredGram& kx,
                                                 const RobustLoss& loss,
                                                 double threshold,
                                                 int max_iter) {
  auto [op, r] = kirwls_cco(kx, kx, loss, threshold, max_iter);
  op.covariance = true;
  return {std::move(op), std::move(r)};
}

std::pair<WeightVector, KirwlsResult> robust_central_moment(
    const CenteredGram& k, int r, const RobustLoss& loss, double threshold,
    int max_iter) {
  require(r >= 1, "robust_central_moment: r must be >= 1");
  Matrix M = k.values;
  for (int i = 1; i < r; ++i) M = M.cwiseProduct(k.values);
  KirwlsResult res = kirwls(M, loss, threshold, max_iter);
  WeightVector w = res.weights;
  return {std::move(w), std::move(res)};
}

double hs_norm(const DualOperator& op) {
  const Matrix M = op.gram_x.values.cwiseProduct(op.gram_y.values);
  const double sq = op.weights.values().dot(M * op.weights.values());
  return std::sqrt(std::max(sq, 0.0));
}

}  // namespace rkcca
