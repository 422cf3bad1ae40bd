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
#include "rkcca/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "rkcca/csv.hpp"
#include "rkcca/influence.hpp"
#include "rkcca/kcca.hpp"

namespace rkcca {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    size_t b = item.find_first_not_of(" \t");
    size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<int> split_ints(const std::string& s, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad integer '" + item + "' in " +
                                  key);
    }
  }
  return out;
}

double parse_number(const std::string& s, const std::string& key) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number '" + s + "' for " + key);
  }
}

RobustLoss parse_loss(const std::string& kind, const std::string& huber_c,
                      const std::string& hampel_c) {
  if (kind == "quadratic") return RobustLoss::quadratic();
  if (kind == "huber") {
    if (huber_c.empty() || huber_c == "median")
      return RobustLoss::huber_adaptive();
    return RobustLoss::huber(parse_number(huber_c, "huber_c"));
  }
  if (kind == "hampel") {
    if (hampel_c.empty() || hampel_c == "median")
      return RobustLoss::hampel_adaptive();
    const auto parts = split_list(hampel_c);
    require(parts.size() == 3, "config: hampel_c needs c1,c2,c3");
    return RobustLoss::hampel(parse_number(parts[0], "hampel_c"),
                              parse_number(parts[1], "hampel_c"),
                              parse_number(parts[2], "hampel_c"));
  }
  throw std::invalid_argument("config: unknown loss '" + kind + "'");
}

struct Accum {
  double sum = 0.0;
  double sumsq = 0.0;
  int count = 0;

  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double sd() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, (sumsq - count * m * m) / (count - 1)));
  }
};

std::vector<std::string> default_generators(const std::string& experiment) {
  if (experiment == "cov-accuracy") return {"tcsd"};
  if (experiment == "norm-ratio") return {"tcsd", "sfsd"};
  if (experiment == "if-ratio") return {"mgsd", "scsd", "smsd"};
  if (experiment == "index-plot") return {"smsd"};
  return {"tcsd"};
}

std::vector<std::string> generators_or_default(const ExperimentConfig& cfg) {
  return cfg.generators.empty() ? default_generators(cfg.experiment)
                                : cfg.generators;
}

KernelSpec resolve_named_kernel(const std::string& name,
                                const std::string& bandwidth,
                                const Eigen::Ref<const Matrix>& X) {
  KernelChoice choice{name, bandwidth};
  return choice.resolve(X);
}

// Fits both estimators on one paired dataset and returns their index
// influence of component j.
struct MethodInfluence {
  IndexInfluence classical;
  IndexInfluence robust;
};

MethodInfluence paired_influence(const ExperimentConfig& cfg,
                                 const Dataset& data) {
  const KernelSpec spec_x = cfg.kernel_x.resolve(data.X);
  const KernelChoice ychoice =
      cfg.kernel_y.kernel.empty() ? cfg.kernel_x : cfg.kernel_y;
  const KernelSpec spec_y = ychoice.resolve(data.Y);
  const GramMatrix kx = gram(spec_x, data.X);
  const GramMatrix ky = gram(spec_y, data.Y);

  const KccaModel classical =
      classical_kcca(kx, ky, cfg.kappa, cfg.component);
  const KccaModel robust =
      robust_kcca(kx, ky, cfg.loss, cfg.kappa, cfg.component,
                  cfg.kirwls_threshold, cfg.kirwls_max_iter);
  require(classical.components() >= cfg.component &&
              robust.components() >= cfg.component,
          "experiment: requested component exceeds available pairs");

  MethodInfluence out{
      KccaInfluence(classical).index_influence(cfg.component),
      KccaInfluence(robust).index_influence(cfg.component)};
  return out;
}

}  // namespace

KernelSpec KernelChoice::resolve(const Eigen::Ref<const Matrix>& X) const {
  if (kernel == "linear" || kernel == "poly1") return KernelSpec::linear();
  if (kernel.rfind("poly", 0) == 0) {
    const int degree = std::stoi(kernel.substr(4));
    return KernelSpec::polynomial(degree);
  }
  if (kernel == "gaussian") {
    if (bandwidth.empty() || bandwidth == "median")
      return KernelSpec::gaussian(median_bandwidth(X));
    return KernelSpec::gaussian(parse_number(bandwidth, "bandwidth"));
  }
  if (kernel == "laplacian") {
    if (bandwidth.empty()) return KernelSpec::laplacian(1.0);
    if (bandwidth == "median")
      return KernelSpec::laplacian(median_bandwidth(X));
    return KernelSpec::laplacian(parse_number(bandwidth, "bandwidth"));
  }
  throw std::invalid_argument("config: unknown kernel '" + kernel + "'");
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key=value");
    auto trim = [](std::string s) {
      const size_t b = s.find_first_not_of(" \t");
      const size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

ExperimentConfig parse_config(const KeyValues& kv) {
  ExperimentConfig cfg;
  std::string loss_kind = "huber", huber_c = "median", hampel_c = "median";
  for (const auto& [key, value] : kv) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "generator" || key == "generators")
      cfg.generators = split_list(value);
    else if (key == "data") cfg.dataset_path = value;
    else if (key == "name") cfg.dataset_name = value;
    else if (key == "label") cfg.label_column = value;
    else if (key == "delimiter") {
      if (value == "comma") cfg.delimiter = ',';
      else if (value == "tab") cfg.delimiter = '\t';
      else if (value == "auto") cfg.delimiter = 0;
      else throw std::invalid_argument("config: delimiter must be comma|tab|auto");
    } else if (key == "n") cfg.n = static_cast<int>(parse_number(value, key));
    else if (key == "fraction") cfg.fraction = parse_number(value, key);
    else if (key == "kernel") cfg.kernel_x.kernel = value;
    else if (key == "bandwidth") cfg.kernel_x.bandwidth = value;
    else if (key == "kernel_y") cfg.kernel_y.kernel = value;
    else if (key == "bandwidth_y") cfg.kernel_y.bandwidth = value;
    else if (key == "kernels") cfg.kernel_grid = split_list(value);
    else if (key == "loss") loss_kind = value;
    else if (key == "huber_c") huber_c = value;
    else if (key == "hampel_c") hampel_c = value;
    else if (key == "threshold") cfg.kirwls_threshold = parse_number(value, key);
    else if (key == "max_iter")
      cfg.kirwls_max_iter = static_cast<int>(parse_number(value, key));
    else if (key == "kappa") cfg.kappa = parse_number(value, key);
    else if (key == "component")
      cfg.component = static_cast<int>(parse_number(value, key));
    else if (key == "n_grid") cfg.n_grid = split_ints(value, key);
    else if (key == "pop_grid") cfg.pop_grid = split_ints(value, key);
    else if (key == "norms") {
      cfg.norms.clear();
      for (const auto& s : split_list(value)) cfg.norms.push_back(parse_norm(s));
    } else if (key == "variates") cfg.variates = split_ints(value, key);
    else if (key == "replicates")
      cfg.replicates = static_cast<int>(parse_number(value, key));
    else if (key == "seed")
      cfg.seed = static_cast<std::uint64_t>(parse_number(value, key));
    else if (key == "knn_k") cfg.knn_k = static_cast<int>(parse_number(value, key));
    else if (key == "folds") cfg.folds = static_cast<int>(parse_number(value, key));
    else if (key == "standardize") {
      require(value == "true" || value == "false",
              "config: standardize must be true|false");
      cfg.standardize = value == "true";
    } else if (key == "out") cfg.out = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  cfg.loss = parse_loss(loss_kind, huber_c, hampel_c);
  require(cfg.replicates >= 1, "config: replicates must be >= 1");
  require(cfg.component >= 1, "config: component must be >= 1");
  require(cfg.fraction >= 0.0 && cfg.fraction < 1.0,
          "config: fraction must lie in [0, 1)");
  return cfg;
}

std::string resolve_out_path(const ExperimentConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  const char* dir = std::getenv("RKCCA_OUT_DIR");
  const std::string base = dir && *dir ? dir : ".";
  return base + "/" + (cfg.experiment.empty() ? "result" : cfg.experiment) +
         ".csv";
}

void emit_csv(const TabularResult& result, const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(result.rows.size());
  for (const auto& row : result.rows) {
    std::vector<std::string> cells = row.id;
    cells.push_back(csv::format_double(row.mean));
    cells.push_back(csv::format_double(row.sd));
    cells.push_back(std::to_string(row.count));
    rows.push_back(std::move(cells));
  }
  csv::write_rows(path, result.header, rows);
}

void emit_csv(const IndexPlotRows& result, const std::string& path) {
  csv::write_rows(path, result.header, result.rows);
}

Dataset ingest_dataset(const std::string& path, const std::string& label_column,
                       char delimiter) {
  const csv::Table table = csv::read_table(path, delimiter);
  if (table.n_rows() == 0) throw std::runtime_error(path + ": no data rows");

  Index label_idx = -1;
  if (!label_column.empty()) {
    // integer strings address columns directly (0-based)
    bool is_int = !label_column.empty() &&
                  label_column.find_first_not_of("0123456789") ==
                      std::string::npos;
    if (is_int) {
      label_idx = std::stol(label_column);
      if (label_idx < 0 || label_idx >= table.n_cols())
        throw std::runtime_error(path + ": label column index out of range");
    } else {
      if (table.header.empty())
        throw std::runtime_error(
            path + ": header required to address label column by name");
      for (size_t j = 0; j < table.header.size(); ++j)
        if (table.header[j] == label_column) label_idx = static_cast<Index>(j);
      if (label_idx < 0)
        throw std::runtime_error(path + ": label column '" + label_column +
                                 "' not found");
    }
  }

  Dataset d;
  d.generator = "file";
  const Index cols = table.n_cols();
  const Index feat_cols = label_idx >= 0 ? cols - 1 : cols;
  require(feat_cols >= 1, path + ": no feature columns");
  d.X.resize(table.n_rows(), feat_cols);

  std::vector<std::string> raw_labels;
  for (Index i = 0; i < table.n_rows(); ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    const int line = table.line_numbers[static_cast<size_t>(i)];
    Index out_j = 0;
    for (Index j = 0; j < cols; ++j) {
      if (j == label_idx) {
        raw_labels.push_back(row[static_cast<size_t>(j)]);
        continue;
      }
      char* end = nullptr;
      const std::string& cell = row[static_cast<size_t>(j)];
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": non-numeric feature '" + cell +
                                 "' in column " + std::to_string(j + 1));
      d.X(i, out_j++) = v;
    }
  }

  if (label_idx >= 0) {
    std::vector<std::string> classes = raw_labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    // numeric label values sort numerically when they all parse
    bool numeric = true;
    for (const auto& c : classes) {
      char* end = nullptr;
      std::strtod(c.c_str(), &end);
      if (c.empty() || end != c.c_str() + c.size()) numeric = false;
    }
    if (numeric)
      std::sort(classes.begin(), classes.end(),
                [](const std::string& a, const std::string& b) {
                  return std::stod(a) < std::stod(b);
                });
    d.labels.resize(raw_labels.size());
    for (size_t i = 0; i < raw_labels.size(); ++i) {
      const auto it = std::find(classes.begin(), classes.end(), raw_labels[i]);
      d.labels[i] = static_cast<int>(it - classes.begin());
    }
  }
  return d;
}

void emit_dataset(const Dataset& data, const std::string& prefix) {
  std::vector<std::string> header;
  Matrix x = data.X;
  for (Index j = 0; j < data.X.cols(); ++j)
    header.push_back("f" + std::to_string(j));
  if (!data.labels.empty()) {
    header.push_back("label");
    x.conservativeResize(Eigen::NoChange, x.cols() + 1);
    for (Index i = 0; i < x.rows(); ++i)
      x(i, x.cols() - 1) = data.labels[static_cast<size_t>(i)];
  }
  csv::write_matrix(prefix + "_X.csv", x, header);

  if (data.paired()) {
    std::vector<std::string> yheader;
    for (Index j = 0; j < data.Y.cols(); ++j)
      yheader.push_back("g" + std::to_string(j));
    csv::write_matrix(prefix + "_Y.csv", data.Y, yheader);
  }

  std::ofstream meta(prefix + "_meta.txt");
  if (!meta) throw std::runtime_error(prefix + "_meta.txt: cannot write");
  meta << "generator=" << data.generator << '\n'
       << "seed=" << data.seed << '\n'
       << "contaminated=" << (data.contaminated ? "true" : "false") << '\n'
       << "fraction=" << csv::format_double(data.fraction) << '\n';
  meta << "contaminated_indices=";
  for (size_t i = 0; i < data.contaminated_indices.size(); ++i)
    meta << (i ? "," : "") << data.contaminated_indices[i];
  meta << '\n';
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

TabularResult run_cov_accuracy(const ExperimentConfig& cfg) {
  const auto gens = generators_or_default(cfg);
  require(gens.size() == 1, "cov-accuracy: one generator at a time");
  const std::string& gen = gens.front();

  std::map<std::pair<int, int>, std::pair<Accum, Accum>> cells;
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    const std::uint64_t rep_seed = substream(cfg.seed, rep);
    for (int N : cfg.pop_grid) {
      const Dataset pop =
          generate(gen, N, false, cfg.fraction, substream(rep_seed, 0));
      const KernelSpec spec = cfg.kernel_x.resolve(pop.X);
      const GramMatrix k_pop = gram(spec, pop.X);
      for (size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
        const int n = cfg.n_grid[static_cast<size_t>(ni)];
        const Dataset sample = generate(gen, n, true, cfg.fraction,
                                        substream(rep_seed, 1 + ni));
        const GramMatrix k_s = gram(spec, sample.X);
        const Matrix k_c = cross_gram(spec, sample.X, pop.X);

        auto& [classical, robust] = cells[{N, n}];
        classical.add(eta_kco(k_s.values, k_c, k_pop.values));

        const Matrix m = k_s.values.cwiseProduct(k_s.values);
        const KirwlsResult w = kirwls(m, cfg.loss, cfg.kirwls_threshold,
                                      cfg.kirwls_max_iter);
        robust.add(eta_rkco(k_s.values, k_c, k_pop.values, w.weights));
      }
    }
  }

  TabularResult out;
  out.header = {"population", "n", "estimator", "mean", "sd", "count"};
  for (int N : cfg.pop_grid) {
    for (int n : cfg.n_grid) {
      const auto& [classical, robust] = cells.at({N, n});
      out.rows.push_back({{std::to_string(N), std::to_string(n), "classical"},
                          classical.mean(),
                          classical.sd(),
                          classical.count});
      out.rows.push_back({{std::to_string(N), std::to_string(n), "robust"},
                          robust.mean(),
                          robust.sd(),
                          robust.count});
    }
  }
  return out;
}

TabularResult run_norm_ratio(const ExperimentConfig& cfg) {
  const auto gens = generators_or_default(cfg);

  // key: generator, kernel, norm, method
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           Accum>
      cells;

  for (const std::string& gen : gens) {
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      const std::uint64_t rep_seed = substream(cfg.seed, rep);
      const Dataset id = generate(gen, cfg.n, false, cfg.fraction, rep_seed);
      const Dataset cd = generate(gen, cfg.n, true, cfg.fraction, rep_seed);

      for (const std::string& kname : cfg.kernel_grid) {
        Matrix dm[2][2];  // [variant 0=id 1=cd][method 0=classical 1=robust]
        const Dataset* variants[2] = {&id, &cd};
        for (int v = 0; v < 2; ++v) {
          const Dataset& d = *variants[v];
          const KernelSpec spec = resolve_named_kernel(
              kname, cfg.kernel_x.bandwidth, d.X);
          const GramMatrix k = gram(spec, d.X);

          const CenteredGram classical_centered =
              center_weighted(k, WeightVector::uniform(k.n()));
          const DualOperator classical{WeightVector::uniform(k.n()),
                                       classical_centered, classical_centered,
                                       true};
          dm[v][0] = classical.dual_matrix();

          auto [centered, wc] = robust_center(k, cfg.loss,
                                              cfg.kirwls_threshold,
                                              cfg.kirwls_max_iter);
          auto [rob, res] = kirwls_cov(centered, cfg.loss,
                                       cfg.kirwls_threshold,
                                       cfg.kirwls_max_iter);
          dm[v][1] = rob.dual_matrix();
        }

        for (NormKind norm : cfg.norms) {
          for (int m = 0; m < 2; ++m) {
            const double id_norm = matrix_norm(dm[0][m], norm);
            const double cd_norm = matrix_norm(dm[1][m], norm);
            require(cd_norm > 0.0, "norm-ratio: zero contaminated norm");
            const double eta = std::abs(1.0 - id_norm / cd_norm);
            cells[{gen, kname, norm_name(norm), m == 0 ? "classical" : "robust"}]
                .add(eta);
          }
        }
      }
    }
  }

  TabularResult out;
  out.header = {"dataset", "kernel", "norm", "method", "mean", "sd", "count"};
  for (const std::string& gen : gens)
    for (const std::string& kname : cfg.kernel_grid)
      for (NormKind norm : cfg.norms)
        for (const std::string method : {"classical", "robust"}) {
          const Accum& a = cells.at({gen, kname, norm_name(norm), method});
          out.rows.push_back(
              {{gen, kname, norm_name(norm), method}, a.mean(), a.sd(),
               a.count});
        }
  return out;
}

TabularResult run_if_ratio(const ExperimentConfig& cfg) {
  const auto gens = generators_or_default(cfg);

  std::map<std::tuple<std::string, std::string, std::string>, Accum> cells;
  for (const std::string& gen : gens) {
    for (int rep = 0; rep < cfg.replicates; ++rep) {
      const std::uint64_t rep_seed = substream(cfg.seed, rep);
      const Dataset id = generate(gen, cfg.n, false, cfg.fraction, rep_seed);
      const Dataset cd = generate(gen, cfg.n, true, cfg.fraction, rep_seed);
      require(id.paired(), "if-ratio: paired generator required");

      const MethodInfluence inf_id = paired_influence(cfg, id);
      const MethodInfluence inf_cd = paired_influence(cfg, cd);

      const IndexInfluence* per_method[2][2] = {
          {&inf_id.classical, &inf_cd.classical},
          {&inf_id.robust, &inf_cd.robust}};
      for (int m = 0; m < 2; ++m) {
        const std::string method = m == 0 ? "classical" : "robust";
        const IndexInfluence& a = *per_method[m][0];
        const IndexInfluence& b = *per_method[m][1];
        cells[{gen, method, "eta_rho"}].add(eta_rho(a.if_rho, b.if_rho));
        cells[{gen, method, "eta_f"}].add(
            eta_f(a.if_fx, a.if_fy, b.if_fx, b.if_fy));
      }
    }
  }

  TabularResult out;
  out.header = {"dataset", "n", "method", "measure", "mean", "sd", "count"};
  for (const std::string& gen : gens)
    for (const std::string method : {"classical", "robust"})
      for (const std::string measure : {"eta_rho", "eta_f"}) {
        const Accum& a = cells.at({gen, method, measure});
        out.rows.push_back({{gen, std::to_string(cfg.n), method, measure},
                            a.mean(),
                            a.sd(),
                            a.count});
      }
  return out;
}

IndexPlotRows run_index_plot(const ExperimentConfig& cfg) {
  const auto gens = generators_or_default(cfg);
  require(gens.size() == 1, "index-plot: one generator at a time");
  const std::string& gen = gens.front();

  const Dataset id = generate(gen, cfg.n, false, cfg.fraction, cfg.seed);
  const Dataset cd = generate(gen, cfg.n, true, cfg.fraction, cfg.seed);
  require(id.paired(), "index-plot: paired generator required");

  const MethodInfluence inf_id = paired_influence(cfg, id);
  const MethodInfluence inf_cd = paired_influence(cfg, cd);

  IndexPlotRows out;
  out.header = {"subject", "method", "variant", "eta"};
  auto emit_series = [&](const std::string& method, const std::string& variant,
                         const Vector& values) {
    for (Index i = 0; i < values.size(); ++i)
      out.rows.push_back({std::to_string(i), method, variant,
                          csv::format_double(values[i])});
  };
  emit_series("classical", "id", inf_id.classical.if_rho);
  emit_series("classical", "cd", inf_cd.classical.if_rho);
  emit_series("robust", "id", inf_id.robust.if_rho);
  emit_series("robust", "cd", inf_cd.robust.if_rho);
  return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::vector<std::vector<Index>> stratified_folds(const std::vector<int>& labels,
                                                 int k, std::uint64_t seed) {
  require(k >= 2, "stratified_folds: need at least two folds");
  require(!labels.empty(), "stratified_folds: empty label vector");

  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<Index>> by_class(static_cast<size_t>(n_classes));
  for (size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0, "stratified_folds: negative label");
    by_class[static_cast<size_t>(labels[i])].push_back(
        static_cast<Index>(i));
  }

  std::mt19937_64 rng(substream(seed, 0x666f6c64ULL));  // "fold"
  std::vector<std::vector<Index>> folds(static_cast<size_t>(k));
  size_t counter = 0;
  for (auto& group : by_class) {
    for (size_t i = group.size(); i > 1; --i) {
      std::uniform_int_distribution<size_t> pick(0, i - 1);
      std::swap(group[i - 1], group[pick(rng)]);
    }
    for (Index idx : group) folds[counter++ % k].push_back(idx);
  }
  return folds;
}

int knn_predict(const Eigen::Ref<const Matrix>& train,
                const std::vector<int>& labels,
                const Eigen::Ref<const RowVector>& query, int k) {
  const Index n = train.rows();
  require(n > 0 && static_cast<size_t>(n) == labels.size(),
          "knn_predict: label count mismatch");
  require(k >= 1, "knn_predict: k must be >= 1");
  const int kk = static_cast<int>(std::min<Index>(k, n));

  std::vector<std::pair<double, Index>> dist(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    dist[static_cast<size_t>(i)] = {(train.row(i) - query).squaredNorm(), i};
  std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());

  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> votes(static_cast<size_t>(n_classes), 0);
  std::vector<double> dist_sum(static_cast<size_t>(n_classes), 0.0);
  for (int i = 0; i < kk; ++i) {
    const int c = labels[static_cast<size_t>(dist[static_cast<size_t>(i)].second)];
    votes[static_cast<size_t>(c)] += 1;
    dist_sum[static_cast<size_t>(c)] +=
        std::sqrt(dist[static_cast<size_t>(i)].first);
  }

  int best = -1;
  for (int c = 0; c < n_classes; ++c) {
    if (votes[static_cast<size_t>(c)] == 0) continue;
    if (best < 0) {
      best = c;
      continue;
    }
    const int vb = votes[static_cast<size_t>(best)];
    const int vc = votes[static_cast<size_t>(c)];
    if (vc > vb) {
      best = c;
    } else if (vc == vb) {
      const double mb = dist_sum[static_cast<size_t>(best)] / vb;
      const double mc = dist_sum[static_cast<size_t>(c)] / vc;
      if (mc < mb) best = c;  // equal means keep the smaller class index
    }
  }
  return best;
}

ClassifyOutcome classify_cv(const Eigen::Ref<const Matrix>& X,
                            const std::vector<int>& labels,
                            const ClassifyOptions& opt) {
  const Index n = X.rows();
  require(static_cast<size_t>(n) == labels.size(),
          "classify_cv: label count mismatch");
  const int n_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  require(n_classes >= 2, "classify_cv: need at least two classes");

  const auto folds = stratified_folds(labels, opt.folds, opt.seed);

  Accum err;
  for (const auto& test_idx : folds) {
    std::vector<char> in_test(static_cast<size_t>(n), 0);
    for (Index i : test_idx) in_test[static_cast<size_t>(i)] = 1;
    std::vector<Index> train_idx;
    train_idx.reserve(static_cast<size_t>(n) - test_idx.size());
    for (Index i = 0; i < n; ++i)
      if (!in_test[static_cast<size_t>(i)]) train_idx.push_back(i);

    Matrix x_tr(train_idx.size(), X.cols());
    Matrix x_te(test_idx.size(), X.cols());
    std::vector<int> y_tr(train_idx.size());
    std::vector<int> y_te(test_idx.size());
    for (size_t i = 0; i < train_idx.size(); ++i) {
      x_tr.row(static_cast<Index>(i)) = X.row(train_idx[i]);
      y_tr[i] = labels[static_cast<size_t>(train_idx[i])];
    }
    for (size_t i = 0; i < test_idx.size(); ++i) {
      x_te.row(static_cast<Index>(i)) = X.row(test_idx[i]);
      y_te[i] = labels[static_cast<size_t>(test_idx[i])];
    }

    if (opt.standardize) {
      const RowVector mean = x_tr.colwise().mean();
      RowVector sd = ((x_tr.rowwise() - mean).array().square().colwise().sum() /
                      std::max<double>(1.0, x_tr.rows() - 1.0))
                         .sqrt();
      for (Index j = 0; j < sd.size(); ++j)
        if (sd[j] <= 0.0) sd[j] = 1.0;
      x_tr = (x_tr.rowwise() - mean).array().rowwise() / sd.array();
      x_te = (x_te.rowwise() - mean).array().rowwise() / sd.array();
    }

    Matrix onehot = Matrix::Zero(static_cast<Index>(y_tr.size()), n_classes);
    for (size_t i = 0; i < y_tr.size(); ++i)
      onehot(static_cast<Index>(i), y_tr[i]) = 1.0;

    const KernelSpec spec_x = opt.kernel_x.resolve(x_tr);
    const GramMatrix kx = gram(spec_x, x_tr);
    const GramMatrix ky = gram(KernelSpec::linear(), onehot);

    // requested variate count capped by the available canonical pairs
    const int p = std::min<int>(opt.variates, static_cast<int>(kx.n()));
    const KccaModel model =
        opt.robust ? robust_kcca(kx, ky, opt.loss, opt.kappa, p)
                   : classical_kcca(kx, ky, opt.kappa, p);

    const Matrix feats_tr = training_variates(model).first;
    const Matrix k_eval = cross_gram(spec_x, x_te, x_tr);
    const Matrix feats_te = canonical_variates_x(model, k_eval);

    int errors = 0;
    for (Index t = 0; t < feats_te.rows(); ++t) {
      const int predicted =
          knn_predict(feats_tr, y_tr, feats_te.row(t), opt.knn_k);
      if (predicted != y_te[static_cast<size_t>(t)]) ++errors;
    }
    err.add(100.0 * errors / static_cast<double>(test_idx.size()));
  }

  return ClassifyOutcome{err.mean(), err.sd(), err.count};
}

TabularResult run_classify(const ExperimentConfig& cfg) {
  require(!cfg.dataset_path.empty(), "classify: data path required");
  require(!cfg.label_column.empty(), "classify: label column required");
  const Dataset data =
      ingest_dataset(cfg.dataset_path, cfg.label_column, cfg.delimiter);
  require(!data.labels.empty(), "classify: dataset has no labels");

  TabularResult out;
  out.header = {"dataset", "method", "variates", "mean_error_pct", "sd",
                "folds"};
  for (int p : cfg.variates) {
    for (const bool robust : {false, true}) {
      ClassifyOptions opt;
      opt.variates = p;
      opt.knn_k = cfg.knn_k;
      opt.folds = cfg.folds;
      opt.kappa = cfg.kappa;
      opt.robust = robust;
      opt.loss = cfg.loss;
      opt.kernel_x = cfg.kernel_x;
      opt.standardize = cfg.standardize;
      opt.seed = cfg.seed;
      const ClassifyOutcome res = classify_cv(data.X, data.labels, opt);
      out.rows.push_back({{cfg.dataset_name, robust ? "robust" : "classical",
                           std::to_string(p)},
                          res.mean_error_pct,
                          res.sd_error_pct,
                          res.folds});
    }
  }
  return out;
}

}  // namespace rkcca
