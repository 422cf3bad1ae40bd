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
#include "rkcca/synthdata.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace rkcca {

namespace {

constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(Rng& rng, double mean, double sd) {
  return std::normal_distribution<double>(mean, sd)(rng);
}

void check_fraction(double fraction) {
  require(fraction >= 0.0 && fraction < 1.0,
          "generator: contamination fraction must lie in [0, 1)");
}

// ceil(fraction * n), with a nudge so exact products are not pushed up by
// floating-point representation of the fraction
Index contaminated_count(Index n, double fraction) {
  return static_cast<Index>(
      std::ceil(fraction * static_cast<double>(n) - 1e-12));
}

// standard normal quantile: Acklam's rational approximation polished with one
// Newton step on Phi(x) = erfc(-x / sqrt 2) / 2
double probit(double p) {
  require(p > 0.0 && p < 1.0, "probit: p must lie in (0, 1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
  return x - e / pdf;
}

// Seeded sample of ceil(fraction * n) distinct row indices (partial
// Fisher-Yates), returned sorted.
std::vector<Index> pick_subset(Index n, double fraction, Rng& rng) {
  const Index m = contaminated_count(n, fraction);
  std::vector<Index> idx(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  for (Index i = 0; i < m; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
  }
  idx.resize(static_cast<size_t>(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::uint64_t substream(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Dataset gen_tcsd(int n1, int n2, int n3, bool contaminated, double fraction,
                 std::uint64_t seed) {
  require(n1 >= 1 && n2 >= 1 && n3 >= 1, "gen_tcsd: counts must be >= 1");
  check_fraction(fraction);
  const Index n = n1 + n2 + n3;
  Rng rng(seed);

  Dataset d;
  d.X.resize(n, 2);
  d.labels.resize(static_cast<size_t>(n));
  const double radii[3] = {1.0, 0.5, 0.25};
  const int counts[3] = {n1, n2, n3};
  Index row = 0;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < counts[c]; ++i, ++row) {
      const double z = uniform(rng, -kPi, kPi);
      d.X(row, 0) = radii[c] * std::cos(z) + normal(rng, 0.0, 0.1);
      d.X(row, 1) = radii[c] * std::sin(z) + normal(rng, 0.0, 0.1);
      d.labels[static_cast<size_t>(row)] = c;
    }
  }
  d.generator = "tcsd";
  d.seed = seed;
  d.contaminated = contaminated;
  d.fraction = contaminated ? fraction : 0.0;
  if (contaminated) {
    d.contaminated_indices = pick_subset(n, fraction, rng);
    for (Index i : d.contaminated_indices) {
      d.X(i, 0) = uniform(rng, -10.0, 10.0);
      d.X(i, 1) = uniform(rng, -10.0, 10.0);
    }
  }
  return d;
}

Dataset gen_sfsd(int n, bool contaminated, double fraction,
                 std::uint64_t seed) {
  require(n >= 1, "gen_sfsd: n must be >= 1");
  check_fraction(fraction);
  Rng rng(seed);

  Dataset d;
  d.X.resize(n, 10);
  auto fill_row = [&](Index i, double noise_sd) {
    const double z = uniform(rng, -2.0 * kPi, 0.0);
    d.X(i, 0) = z + normal(rng, 0.0, noise_sd);
    for (int j = 2; j <= 10; ++j)
      d.X(i, j - 1) = j * std::sin(j * z) + normal(rng, 0.0, noise_sd);
  };
  for (Index i = 0; i < n; ++i) fill_row(i, 0.1);

  d.generator = "sfsd";
  d.seed = seed;
  d.contaminated = contaminated;
  d.fraction = contaminated ? fraction : 0.0;
  if (contaminated) {
    d.contaminated_indices = pick_subset(n, fraction, rng);
    for (Index i : d.contaminated_indices) fill_row(i, std::sqrt(10.0));
  }
  return d;
}

Dataset gen_mgsd(int n, bool contaminated, double fraction, std::uint64_t seed,
                 const MgsdConfig& cfg) {
  require(n >= 1, "gen_mgsd: n must be >= 1");
  check_fraction(fraction);

  Matrix sigma(12, 12);
  for (Index i = 0; i < 12; ++i) {
    for (Index j = 0; j < 12; ++j) {
      const bool same_block = (i < 6) == (j < 6);
      sigma(i, j) = same_block
                        ? std::pow(cfg.within_ar, std::abs(double(i - j)))
                        : cfg.cross;
    }
  }
  Eigen::LLT<Matrix> llt(sigma);
  require(llt.info() == Eigen::Success,
          "gen_mgsd: covariance configuration is not positive definite");
  const Matrix chol = llt.matrixL();

  Rng rng(seed);
  Dataset d;
  d.X.resize(n, 6);
  d.Y.resize(n, 6);
  auto fill_row = [&](Index i, double mean) {
    while (true) {
      Vector g(12);
      for (Index k = 0; k < 12; ++k) g[k] = normal(rng, 0.0, 1.0);
      const Vector z = (chol * g).array() + mean;
      bool ok = true;
      for (Index k = 6; k < 12; ++k)
        if (z[k] == 0.0) ok = false;  // log|0| guard; redraw the row
      if (!ok) continue;
      d.X.row(i) = z.head(6).transpose();
      d.Y.row(i) = z.tail(6).array().abs().log().transpose();
      return;
    }
  };
  for (Index i = 0; i < n; ++i) fill_row(i, 0.0);

  d.generator = "mgsd";
  d.seed = seed;
  d.contaminated = contaminated;
  d.fraction = contaminated ? fraction : 0.0;
  if (contaminated) {
    d.contaminated_indices = pick_subset(n, fraction, rng);
    for (Index i : d.contaminated_indices) fill_row(i, 1.0);
  }
  return d;
}

Dataset gen_scsd(int n, bool contaminated, double fraction,
                 std::uint64_t seed) {
  require(n >= 1, "gen_scsd: n must be >= 1");
  check_fraction(fraction);
  Rng rng(seed);

  Dataset d;
  d.X.resize(n, 100);
  d.Y.resize(n, 100);
  auto fill_row = [&](Index i, double noise_mean) {
    const double z = uniform(rng, -kPi, kPi);
    const double eta = normal(rng, noise_mean, 0.1);
    for (int j = 1; j <= 100; ++j) {
      d.X(i, j - 1) = std::sin(j * z) + eta;
      d.Y(i, j - 1) = std::cos(j * z) + eta;
    }
  };
  for (Index i = 0; i < n; ++i) fill_row(i, 0.0);

  d.generator = "scsd";
  d.seed = seed;
  d.contaminated = contaminated;
  d.fraction = contaminated ? fraction : 0.0;
  if (contaminated) {
    d.contaminated_indices = pick_subset(n, fraction, rng);
    for (Index i : d.contaminated_indices) fill_row(i, 1.0);
  }
  return d;
}

Dataset gen_smsd(int n, bool contaminated, double fraction, std::uint64_t seed,
                 const SmsdConfig& cfg) {
  require(n >= 1, "gen_smsd: n must be >= 1");
  require(cfg.p_snp >= 10 && cfg.p_voxel >= 10,
          "gen_smsd: need at least 10 columns per view");
  check_fraction(fraction);
  Rng rng(seed);

  require(cfg.maf > 0.0 && cfg.maf < 1.0, "gen_smsd: maf must lie in (0, 1)");
  require(cfg.support > 0.0 && cfg.support <= 1.0,
          "gen_smsd: support must lie in (0, 1]");

  // sparse loading vectors with constant entries over a seeded support
  auto loading = [&](int p) -> Vector {
    Vector v = Vector::Zero(p);
    std::vector<Index> cols = pick_subset(p, cfg.support, rng);
    if (cols.empty()) cols.push_back(0);
    for (Index c : cols) v[c] = cfg.loading_scale;
    return v;
  };
  const Vector vx = loading(cfg.p_snp);
  const Vector vy = loading(cfg.p_voxel);

  // Hardy-Weinberg genotype thresholds: P(0) = (1-maf)^2, P(1) = 2 maf (1-maf)
  const double p_zero = (1.0 - cfg.maf) * (1.0 - cfg.maf);
  const double p_zero_or_one = p_zero + 2.0 * cfg.maf * (1.0 - cfg.maf);
  const double q0 = probit(p_zero);
  const double q1 = probit(p_zero_or_one);

  Dataset d;
  d.X.resize(n, cfg.p_snp);
  d.Y.resize(n, cfg.p_voxel);
  auto fill_row = [&](Index i, double noise) {
    const double u = normal(rng, 0.0, 1.0);
    for (Index j = 0; j < cfg.p_snp; ++j) {
      const double g = cfg.signal * u * vx[j] + noise * normal(rng, 0.0, 1.0);
      // thresholds scale with the ideal-data marginal deviation per column
      const double sd = std::sqrt(cfg.signal * cfg.signal * vx[j] * vx[j] +
                                  cfg.noise_id * cfg.noise_id);
      d.X(i, j) = g < q0 * sd ? 0.0 : (g < q1 * sd ? 1.0 : 2.0);
    }
    for (Index j = 0; j < cfg.p_voxel; ++j)
      d.Y(i, j) = cfg.signal * u * vy[j] + noise * normal(rng, 0.0, 1.0);
  };
  for (Index i = 0; i < n; ++i) fill_row(i, cfg.noise_id);

  d.generator = "smsd";
  d.seed = seed;
  d.contaminated = contaminated;
  d.fraction = contaminated ? fraction : 0.0;
  if (contaminated) {
    d.contaminated_indices = pick_subset(n, fraction, rng);
    for (Index i : d.contaminated_indices) fill_row(i, cfg.noise_cd);
  }
  return d;
}

Dataset generate(const std::string& name, int n, bool contaminated,
                 double fraction, std::uint64_t seed) {
  if (name == "tcsd") {
    const int n1 = n / 3 + (n % 3 > 0 ? 1 : 0);
    const int n2 = n / 3 + (n % 3 > 1 ? 1 : 0);
    return gen_tcsd(n1, n2, n / 3, contaminated, fraction, seed);
  }
  if (name == "sfsd") return gen_sfsd(n, contaminated, fraction, seed);
  if (name == "mgsd") return gen_mgsd(n, contaminated, fraction, seed);
  if (name == "scsd") return gen_scsd(n, contaminated, fraction, seed);
  if (name == "smsd") return gen_smsd(n, contaminated, fraction, seed);
  throw std::invalid_argument("generate: unknown generator '" + name + "'");
}

}  // namespace rkcca
