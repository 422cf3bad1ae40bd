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
#include <map>
#include <string>
#include <vector>

#include "rkcca/kernels.hpp"
#include "rkcca/metrics.hpp"
#include "rkcca/robust.hpp"
#include "rkcca/synthdata.hpp"
#include "rkcca/types.hpp"

namespace rkcca {

/// Kernel selection with a possibly data-dependent bandwidth. An empty
/// bandwidth string picks the kernel default (gaussian: median pairwise
/// distance; laplacian: 1). "median" forces the median heuristic; anything
/// else is parsed as a number.
struct KernelChoice {
  std::string kernel = "gaussian";  // linear | poly<d> | gaussian | laplacian
  std::string bandwidth;

  KernelSpec resolve(const Eigen::Ref<const Matrix>& X) const;
};

/// Flat experiment configuration. Values come from a key=value config file
/// and/or CLI flags; flags override file entries. Seeds are always explicit.
struct ExperimentConfig {
  std::string experiment;

  // data source
  std::vector<std::string> generators;  // synthetic sources
  std::string dataset_path;             // delimited file for classify
  std::string dataset_name = "data";
  std::string label_column;             // name or 0-based index
  char delimiter = 0;                   // 0 = auto
  int n = 100;
  double fraction = 0.05;

  // estimators
  KernelChoice kernel_x;
  KernelChoice kernel_y;  // classify default: linear on the label indicators
  RobustLoss loss = RobustLoss::huber_adaptive();
  double kirwls_threshold = 1e-8;
  int kirwls_max_iter = 100;
  double kappa = 1e-5;
  int component = 1;  // canonical pair used by influence measures

  // experiment shape
  std::vector<int> n_grid = {15, 30, 60, 120};         // cov-accuracy
  std::vector<int> pop_grid = {1500};                  // cov-accuracy
  std::vector<std::string> kernel_grid = {"linear", "poly2", "poly3",
                                          "gaussian", "laplacian"};
  std::vector<NormKind> norms = {NormKind::O, NormKind::F, NormKind::M,
                                 NormKind::S};
  std::vector<int> variates = {2, 5, 10};              // classify
  int replicates = 20;
  std::uint64_t seed = 1;

  // classification
  int knn_k = 5;
  int folds = 10;
  bool standardize = true;

  std::string out;  // output path; empty = <RKCCA_OUT_DIR|.>/<experiment>.csv
};

using KeyValues = std::map<std::string, std::string>;

/// Parses a flat key=value file ('#' starts a comment line).
KeyValues read_key_values(const std::string& path);

/// Builds a config from key=value pairs; unknown keys raise an error.
ExperimentConfig parse_config(const KeyValues& kv);

/// Output path resolution honoring the RKCCA_OUT_DIR environment variable.
std::string resolve_out_path(const ExperimentConfig& cfg);

/// Aggregated result table: identifier cells plus mean / sd / count.
struct TabularResult {
  std::vector<std::string> header;
  struct Row {
    std::vector<std::string> id;
    double mean = 0.0;
    double sd = 0.0;
    int count = 0;
  };
  std::vector<Row> rows;
};

void emit_csv(const TabularResult& result, const std::string& path);

/// Per-subject influence rows for the index plot CSV.
struct IndexPlotRows {
  std::vector<std::string> header;  // subject, method, variant, eta
  std::vector<std::vector<std::string>> rows;
};

void emit_csv(const IndexPlotRows& result, const std::string& path);

/// Loads a delimited dataset; the label column (by name, or 0-based index
/// when the string parses as an integer) becomes integer class labels in
/// first-seen order of the sorted distinct values.
Dataset ingest_dataset(const std::string& path, const std::string& label_column,
                       char delimiter = 0);

/// Writes a dataset as <prefix>_X.csv (labels appended as a final "label"
/// column when present) and <prefix>_Y.csv for paired data.
void emit_dataset(const Dataset& data, const std::string& prefix);

// ---------------------------------------------------------------------------
// Experiment runners. All are deterministic functions of the config.
// ---------------------------------------------------------------------------

/// Convergence of the raw second-moment estimators to their large-sample
/// counterpart: per (population size, sample size), mean/sd of eta_kco and
/// eta_rkco over replicates. Populations are ideal draws; samples are
/// contaminated.
TabularResult run_cov_accuracy(const ExperimentConfig& cfg);

/// Contamination sensitivity of classical vs robust covariance operators
/// across kernels and matrix norms: eta_co per (generator, kernel, norm,
/// method).
TabularResult run_norm_ratio(const ExperimentConfig& cfg);

/// Influence-based sensitivity of classical vs robust kernel CCA: eta_rho
/// and eta_f per (generator, n, method).
TabularResult run_if_ratio(const ExperimentConfig& cfg);

/// Per-subject influence values of rho_j^2 for the four (method, variant)
/// series on one seeded dataset pair.
IndexPlotRows run_index_plot(const ExperimentConfig& cfg);

/// kNN (k = knn_k) classification error of canonical features under
/// stratified cross-validation, per (method, number of variates).
TabularResult run_classify(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Classification building blocks (exposed for tests).
// ---------------------------------------------------------------------------

/// Seeded stratified fold assignment; every index appears in exactly one
/// fold and class proportions are balanced across folds.
std::vector<std::vector<Index>> stratified_folds(
    const std::vector<int>& labels, int k, std::uint64_t seed);

/// kNN vote among the k nearest training rows (Euclidean). Ties are broken
/// by the smaller mean distance of the tied classes' neighbors, then by the
/// smaller class index.
int knn_predict(const Eigen::Ref<const Matrix>& train,
                const std::vector<int>& labels,
                const Eigen::Ref<const RowVector>& query, int k);

struct ClassifyOptions {
  int variates = 5;
  int knn_k = 5;
  int folds = 10;
  double kappa = 1e-5;
  bool robust = false;
  RobustLoss loss = RobustLoss::huber_adaptive();
  KernelChoice kernel_x;  // default: gaussian, median bandwidth
  bool standardize = true;
  std::uint64_t seed = 1;
};

struct ClassifyOutcome {
  double mean_error_pct = 0.0;
  double sd_error_pct = 0.0;
  int folds = 0;
};

/// Cross-validated kNN error of canonical features: kernel CCA is fitted per
/// training fold against one-hot label indicators (linear kernel on the label
/// side), test folds are projected through the X-side variates only.
ClassifyOutcome classify_cv(const Eigen::Ref<const Matrix>& X,
                            const std::vector<int>& labels,
                            const ClassifyOptions& opt);

}  // namespace rkcca
