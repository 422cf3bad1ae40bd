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

#include <cstdint>
#include <string>
#include <vector>

#include "rkcca/types.hpp"

namespace rkcca {

/// Seeded synthetic dataset, optionally paired and/or labeled.
///
/// The contaminated variant of a generator reproduces the ideal draw bit for
/// bit and then replaces a seeded random subset of ceil(fraction * n) rows
/// with draws from the contaminating distribution; contaminated_indices
/// records exactly which rows were replaced.
struct Dataset {
  Matrix X;
  Matrix Y;                  // 0 x 0 when unpaired
  std::vector<int> labels;   // empty when unlabeled
  std::string generator;
  std::uint64_t seed = 0;
  bool contaminated = false;
  double fraction = 0.0;
  std::vector<Index> contaminated_indices;

  Index n() const { return X.rows(); }
  bool paired() const { return Y.size() > 0; }
};

/// Mixes a seed with a stream index into an independent substream seed, so
/// replicates derive deterministic, non-overlapping generators.
std::uint64_t substream(std::uint64_t seed, std::uint64_t stream);

/// Three concentric circles (radii 1, 0.5, 0.25) in R^2 with N(0, 0.01 I)
/// noise; labels record the circle. Contaminated rows are replaced by points
/// drawn uniformly from the square [-10, 10]^2.
Dataset gen_tcsd(int n1, int n2, int n3, bool contaminated,
                 double fraction = 0.05, std::uint64_t seed = 0);

/// Sine-frequency curve (z, 2 sin 2z, ..., 10 sin 10z) in R^10 with
/// N(0, 0.01 I) noise, z ~ U[-2 pi, 0]; contaminated rows use N(0, 10 I)
/// noise instead.
Dataset gen_sfsd(int n, bool contaminated, double fraction = 0.05,
                 std::uint64_t seed = 0);

struct MgsdConfig {
  double within_ar = 0.7;  // AR(1) coefficient inside each 6-block
  double cross = 0.3;      // constant cross-block covariance
};

/// Paired 6+6 multivariate Gaussian: Z in R^12 ~ N(0, Sigma), X = first six
/// coordinates, Y = log |last six|. Contaminated rows draw Z ~ N(1, Sigma).
/// Rows with an exactly zero coordinate in the Y block are redrawn.
Dataset gen_mgsd(int n, bool contaminated, double fraction = 0.05,
                 std::uint64_t seed = 0, const MgsdConfig& cfg = {});

/// Paired sine/cosine curves: X_ij = sin(j z_i) + eta_i and
/// Y_ij = cos(j z_i) + eta_i for j = 1..100, z ~ U[-pi, pi], and one shared
/// noise draw eta_i ~ N(0, 10^-2) per row. Contaminated rows use
/// eta_i ~ N(1, 10^-2).
Dataset gen_scsd(int n, bool contaminated, double fraction = 0.05,
                 std::uint64_t seed = 0);

struct SmsdConfig {
  int p_snp = 1000;
  int p_voxel = 1000;
  double signal = 0.5;
  double noise_id = 1.0;
  double noise_cd = 10.0;
  double support = 0.1;        // fraction of columns loaded by the latent
  double loading_scale = 1.2;  // entry magnitude of the loading vectors
  double maf = 0.3;            // minor allele frequency for the thresholds
};

/// Paired SNP/voxel latent-factor model: a shared latent u_i ~ N(0,1) loads a
/// sparse subset of columns in both views, each supported column with entry
/// loading_scale, at the given signal level; the SNP view is discretized to
/// {0,1,2} by Hardy-Weinberg quantile thresholds. Contaminated rows are
/// regenerated with noise_cd in place of noise_id.
Dataset gen_smsd(int n, bool contaminated, double fraction = 0.05,
                 std::uint64_t seed = 0, const SmsdConfig& cfg = {});

/// Dispatch by generator name ("tcsd" uses n split across the three circles
/// as evenly as possible).
Dataset generate(const std::string& name, int n, bool contaminated,
                 double fraction, std::uint64_t seed);

}  // namespace rkcca
