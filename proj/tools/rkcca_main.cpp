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
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "rkcca/csv.hpp"
#include "rkcca/experiments.hpp"
#include "rkcca/influence.hpp"
#include "rkcca/kcca.hpp"
#include "rkcca/kernels.hpp"
#include "rkcca/robust.hpp"
#include "rkcca/synthdata.hpp"

namespace {

using namespace rkcca;

// flags shared by several subcommands, collected into config overrides
struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value

  ExperimentConfig build(const std::string& experiment) const {
    KeyValues kv;
    if (!config_path.empty()) kv = read_key_values(config_path);
    for (const auto& item : overrides) {
      const size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + item +
                                    "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    kv["experiment"] = experiment;
    return parse_config(kv);
  }
};

Matrix load_matrix(const std::string& path, char delimiter = 0) {
  const csv::Table t = csv::read_table(path, delimiter);
  return csv::to_matrix(t, path);
}

KernelSpec resolve_kernel_flag(const std::string& kernel,
                               const std::string& bandwidth, const Matrix& X) {
  KernelChoice choice{kernel, bandwidth};
  return choice.resolve(X);
}

RobustLoss loss_from_flags(const std::string& loss, const std::string& c) {
  KeyValues kv;
  kv["loss"] = loss;
  if (!c.empty()) {
    kv["huber_c"] = c;
    kv["hampel_c"] = c;
  }
  ExperimentConfig cfg = parse_config(kv);
  return cfg.loss;
}

void write_weights(const std::string& path, const WeightVector& w) {
  csv::write_matrix(path, w.values(), {"weight"});
}

int run_gen_data(const std::string& generator, int n, bool contaminated,
                 double fraction, std::uint64_t seed, const std::string& out) {
  const Dataset d = generate(generator, n, contaminated, fraction, seed);
  emit_dataset(d, out);
  std::cout << "wrote " << out << "_X.csv";
  if (d.paired()) std::cout << " and " << out << "_Y.csv";
  std::cout << " (n=" << d.n() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust kernel covariance operators and kernel CCA"};
  app.require_subcommand(1);

  // ---- gen-data ----
  std::string gen_name = "tcsd", gen_out = "dataset";
  int gen_n = 100;
  bool gen_contaminated = false;
  double gen_fraction = 0.05;
  std::uint64_t gen_seed = 1;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic dataset");
  gen_cmd->add_option("--generator", gen_name,
                      "tcsd|sfsd|mgsd|scsd|smsd");
  gen_cmd->add_option("--n", gen_n, "sample size");
  gen_cmd->add_flag("--contaminated", gen_contaminated,
                    "draw the contaminated variant");
  gen_cmd->add_option("--fraction", gen_fraction, "contaminated fraction");
  gen_cmd->add_option("--seed", gen_seed, "RNG seed");
  gen_cmd->add_option("--out", gen_out, "output file prefix");

  // ---- gram ----
  std::string gram_input, gram_kernel = "gaussian", gram_bandwidth,
                          gram_out = "gram.csv";
  auto* gram_cmd = app.add_subcommand("gram", "compute a kernel Gram matrix");
  gram_cmd->add_option("--input", gram_input, "data file (rows = points)")
      ->required();
  gram_cmd->add_option("--kernel", gram_kernel,
                       "linear|poly<d>|gaussian|laplacian");
  gram_cmd->add_option("--bandwidth", gram_bandwidth, "number or 'median'");
  gram_cmd->add_option("--out", gram_out, "output CSV");

  // ---- robust-gram ----
  std::string rg_input, rg_kernel = "gaussian", rg_bandwidth,
                        rg_loss = "huber", rg_c, rg_out = "robust_gram.csv",
                        rg_weights_out;
  auto* rg_cmd = app.add_subcommand(
      "robust-gram", "robustly centered Gram matrix and KIRWLS weights");
  rg_cmd->add_option("--input", rg_input, "data file")->required();
  rg_cmd->add_option("--kernel", rg_kernel, "kernel kind");
  rg_cmd->add_option("--bandwidth", rg_bandwidth, "number or 'median'");
  rg_cmd->add_option("--loss", rg_loss, "quadratic|huber|hampel");
  rg_cmd->add_option("--constant", rg_c, "loss constant(s), default median");
  rg_cmd->add_option("--out", rg_out, "output CSV");
  rg_cmd->add_option("--weights-out", rg_weights_out, "weights CSV");

  // ---- kcca / robust-kcca ----
  struct KccaFlags {
    std::string x, y, kernel = "gaussian", bandwidth, kernel_y, bandwidth_y;
    std::string loss = "huber", c;
    double kappa = 1e-5;
    int p = 2;
    std::string out = "kcca";
  } kf, rkf;
  auto add_kcca_flags = [](CLI::App* cmd, KccaFlags& f, bool robust) {
    cmd->add_option("--x", f.x, "first view data file")->required();
    cmd->add_option("--y", f.y, "second view data file")->required();
    cmd->add_option("--kernel", f.kernel, "kernel for both views");
    cmd->add_option("--bandwidth", f.bandwidth, "number or 'median'");
    cmd->add_option("--kernel-y", f.kernel_y, "override Y-view kernel");
    cmd->add_option("--bandwidth-y", f.bandwidth_y, "Y-view bandwidth");
    cmd->add_option("--kappa", f.kappa, "regularization");
    cmd->add_option("--components", f.p, "canonical pairs to extract");
    cmd->add_option("--out", f.out, "output file prefix");
    if (robust) {
      cmd->add_option("--loss", f.loss, "quadratic|huber|hampel");
      cmd->add_option("--constant", f.c, "loss constant(s), default median");
    }
  };
  auto* kcca_cmd = app.add_subcommand("kcca", "classical kernel CCA");
  add_kcca_flags(kcca_cmd, kf, false);
  auto* rkcca_cmd = app.add_subcommand("robust-kcca", "robust kernel CCA");
  add_kcca_flags(rkcca_cmd, rkf, true);

  // ---- influence ----
  struct InfluenceFlags {
    std::string x, y, kernel = "gaussian", bandwidth, kernel_y, bandwidth_y;
    std::string method = "classical", loss = "huber", c;
    double kappa = 1e-5;
    int component = 1;
    std::string out = "influence.csv";
  } inf;
  auto* inf_cmd = app.add_subcommand(
      "influence", "per-subject influence of kernel CCA (index plot data)");
  inf_cmd->add_option("--x", inf.x, "first view data file")->required();
  inf_cmd->add_option("--y", inf.y, "second view data file")->required();
  inf_cmd->add_option("--kernel", inf.kernel, "kernel for both views");
  inf_cmd->add_option("--bandwidth", inf.bandwidth, "number or 'median'");
  inf_cmd->add_option("--kernel-y", inf.kernel_y, "override Y-view kernel");
  inf_cmd->add_option("--bandwidth-y", inf.bandwidth_y, "Y-view bandwidth");
  inf_cmd->add_option("--method", inf.method, "classical|robust");
  inf_cmd->add_option("--loss", inf.loss, "robust loss");
  inf_cmd->add_option("--constant", inf.c, "loss constant(s)");
  inf_cmd->add_option("--kappa", inf.kappa, "regularization");
  inf_cmd->add_option("--component", inf.component, "canonical pair index");
  inf_cmd->add_option("--out", inf.out, "output CSV");

  // ---- experiment ----
  CommonFlags common;
  std::string experiment_mode;
  auto* exp_cmd = app.add_subcommand("experiment", "run a paper experiment");
  exp_cmd
      ->add_option("mode", experiment_mode,
                   "cov-accuracy|norm-ratio|if-ratio|index-plot|classify")
      ->required();
  exp_cmd->add_option("--config", common.config_path, "key=value config file");
  exp_cmd->add_option("--set", common.overrides,
                      "override a config key (key=value, repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed())
      return run_gen_data(gen_name, gen_n, gen_contaminated, gen_fraction,
                          gen_seed, gen_out);

    if (gram_cmd->parsed()) {
      const Matrix X = load_matrix(gram_input);
      const GramMatrix K =
          gram(resolve_kernel_flag(gram_kernel, gram_bandwidth, X), X);
      csv::write_matrix(gram_out, K.values);
      std::cout << "wrote " << gram_out << " (" << K.n() << "x" << K.n()
                << ", kernel=" << K.spec.name() << ")\n";
      return 0;
    }

    if (rg_cmd->parsed()) {
      const Matrix X = load_matrix(rg_input);
      const GramMatrix K =
          gram(resolve_kernel_flag(rg_kernel, rg_bandwidth, X), X);
      const auto [centered, w] =
          robust_center(K, loss_from_flags(rg_loss, rg_c));
      csv::write_matrix(rg_out, centered.values);
      if (!rg_weights_out.empty()) write_weights(rg_weights_out, w);
      std::cout << "wrote " << rg_out << "\n";
      return 0;
    }

    if (kcca_cmd->parsed() || rkcca_cmd->parsed()) {
      const bool robust = rkcca_cmd->parsed();
      const KccaFlags& f = robust ? rkf : kf;
      const Matrix X = load_matrix(f.x);
      const Matrix Y = load_matrix(f.y);
      require(X.rows() == Y.rows(), "kcca: views must have equal row counts");
      const KernelSpec sx = resolve_kernel_flag(f.kernel, f.bandwidth, X);
      const KernelSpec sy = resolve_kernel_flag(
          f.kernel_y.empty() ? f.kernel : f.kernel_y,
          f.bandwidth_y.empty() ? f.bandwidth : f.bandwidth_y, Y);
      const GramMatrix kx = gram(sx, X);
      const GramMatrix ky = gram(sy, Y);
      const KccaModel model =
          robust ? robust_kcca(kx, ky, loss_from_flags(f.loss, f.c), f.kappa,
                               f.p)
                 : classical_kcca(kx, ky, f.kappa, f.p);
      csv::write_matrix(f.out + "_rho.csv", model.rho, {"rho"});
      csv::write_matrix(f.out + "_alpha_x.csv", model.alpha_x);
      csv::write_matrix(f.out + "_alpha_y.csv", model.alpha_y);
      write_weights(f.out + "_weights.csv", model.op_w);
      std::cout << "wrote " << f.out << "_{rho,alpha_x,alpha_y,weights}.csv"
                << " (components=" << model.components() << ")\n";
      return 0;
    }

    if (inf_cmd->parsed()) {
      const Matrix X = load_matrix(inf.x);
      const Matrix Y = load_matrix(inf.y);
      require(X.rows() == Y.rows(),
              "influence: views must have equal row counts");
      const KernelSpec sx = resolve_kernel_flag(inf.kernel, inf.bandwidth, X);
      const KernelSpec sy = resolve_kernel_flag(
          inf.kernel_y.empty() ? inf.kernel : inf.kernel_y,
          inf.bandwidth_y.empty() ? inf.bandwidth : inf.bandwidth_y, Y);
      const GramMatrix kx = gram(sx, X);
      const GramMatrix ky = gram(sy, Y);
      require(inf.method == "classical" || inf.method == "robust",
              "influence: method must be classical|robust");
      const KccaModel model =
          inf.method == "robust"
              ? robust_kcca(kx, ky, loss_from_flags(inf.loss, inf.c),
                            inf.kappa, inf.component)
              : classical_kcca(kx, ky, inf.kappa, inf.component);
      const auto records = index_plot_data(model, inf.component);
      std::vector<std::vector<std::string>> rows;
      for (size_t i = 0; i < records.size(); ++i)
        rows.push_back({std::to_string(i), inf.method,
                        csv::format_double(records[i].if_rho)});
      csv::write_rows(inf.out, {"subject", "method", "if_rho"}, rows);
      std::cout << "wrote " << inf.out << "\n";
      return 0;
    }

    if (exp_cmd->parsed()) {
      const ExperimentConfig cfg = common.build(experiment_mode);
      const std::string out = resolve_out_path(cfg);
      if (experiment_mode == "cov-accuracy")
        emit_csv(run_cov_accuracy(cfg), out);
      else if (experiment_mode == "norm-ratio")
        emit_csv(run_norm_ratio(cfg), out);
      else if (experiment_mode == "if-ratio")
        emit_csv(run_if_ratio(cfg), out);
      else if (experiment_mode == "index-plot")
        emit_csv(run_index_plot(cfg), out);
      else if (experiment_mode == "classify")
        emit_csv(run_classify(cfg), out);
      else
        throw std::invalid_argument("experiment: unknown mode '" +
                                    experiment_mode + "'");
      std::cout << "wrote " << out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
