// Copyright 2026 The iscb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: dataset generation, training and evaluation, the
// experiment protocols and the theory tables. Every table goes to CSV.
//
// Exit codes: 0 success, 1 other failure, 2 usage, 3 I/O, 4 gate failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "iscb/datagen.hpp"
#include "iscb/errors.hpp"
#include "iscb/experiment.hpp"
#include "iscb/io.hpp"
#include "iscb/iscb.hpp"

namespace fs = std::filesystem;
using namespace iscb;

namespace {

constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitGate = 4;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
    case ErrorKind::parse:
    case ErrorKind::format:
    case ErrorKind::length:
    case ErrorKind::migration:
      return kExitIo;
    case ErrorKind::configuration:
    case ErrorKind::invalid_dimension:
    case ErrorKind::infeasible_tuple:
    case ErrorKind::pattern_width:
    case ErrorKind::invalid_iteration:
      return kExitUsage;
    default:
      return kExitOther;
  }
}

void emit(const fs::path& out, const std::string& name, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(out);
  io::write_text(out / name, text);
  std::cerr << "wrote " << (out / name).string() << "\n";
}

fs::path default_data_dir() {
  if (const char* env = std::getenv("SCB_DATA_DIR")) return env;
  return "data/mnist";
}

struct GenArgs {
  std::string generator;
  int n = 100;
  int n2 = 0;
  double angle = std::numbers::pi / 8;
  Seed seed = 1;
  std::string out;
};

struct ModelArgs {
  std::string data;
  std::string model;
  int m = 100;
  int levels = 1;
  int iterations = 1;
  std::string variant = "rtilde";
  Seed seed = 1;
  bool affine = false;
};

struct TheoryArgs {
  std::size_t draws = 100000;
  Seed seed = 1;
  int steps = 50;
  std::string out;
};

void add_experiment_flags(CLI::App* app, experiment::ExperimentConfig& c, std::string& variant,
                          std::string& out, std::string& data_dir) {
  app->add_option("--m", c.m, "hyperplanes per layer")->capture_default_str();
  app->add_option("--L", c.levels, "levels (tuple sizes 1..L)")->capture_default_str();
  app->add_option("--K", c.iterations, "applications of SCB")->capture_default_str();
  app->add_option("--variant", variant, "features passed between layers")
      ->check(CLI::IsMember({"rtilde", "rhat"}))
      ->capture_default_str();
  app->add_option("--seed-base", c.seed_base, "trial t uses seed-base + t")->capture_default_str();
  app->add_option("--trials", c.trials)->capture_default_str();
  app->add_option("--train-per-class", c.train_per_class)->capture_default_str();
  app->add_option("--test-per-class", c.test_per_class)->capture_default_str();
  app->add_option("--data-dir", data_dir, "MNIST directory (default: $SCB_DATA_DIR or data/mnist)");
  app->add_option("--out", out, "directory for the CSV report (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative sparse consensus binary classification"};
  app.require_subcommand(1);

  // gen-data
  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a synthetic dataset as CSV");
  gen_cmd->add_option("generator", gen.generator)
      ->required()
      ->check(CLI::IsMember({"sandwich", "symmetric", "point-masses", "wedges", "arcs"}));
  gen_cmd->add_option("--n", gen.n, "points per class (blue points for sandwich)")->capture_default_str();
  gen_cmd->add_option("--n2", gen.n2, "second count: red points (sandwich) or class-2 mass");
  gen_cmd->add_option("--angle", gen.angle, "separation angle or symmetric spread, radians")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "CSV path (stdout when omitted)");

  // train / eval
  ModelArgs model_args;
  auto* train_cmd = app.add_subcommand("train", "fit a model on the training split of a CSV dataset");
  train_cmd->add_option("--data", model_args.data)->required();
  train_cmd->add_option("--out", model_args.model, "model file")->required();
  train_cmd->add_option("--m", model_args.m)->capture_default_str();
  train_cmd->add_option("--L", model_args.levels)->capture_default_str();
  train_cmd->add_option("--K", model_args.iterations)->capture_default_str();
  train_cmd->add_option("--variant", model_args.variant)->check(CLI::IsMember({"rtilde", "rhat"}));
  train_cmd->add_option("--seed", model_args.seed)->capture_default_str();
  train_cmd->add_flag("--affine", model_args.affine, "offset hyperplanes inside the data's bounding box");

  auto* eval_cmd = app.add_subcommand("eval", "report per-layer accuracy on the test split");
  eval_cmd->add_option("--model", model_args.model)->required();
  eval_cmd->add_option("--data", model_args.data)->required();

  // experiment
  experiment::ExperimentConfig exp;
  std::string exp_variant = "rtilde";
  std::string exp_out;
  std::string exp_data_dir;
  auto* exp_cmd = app.add_subcommand("experiment", "run an experiment protocol");
  exp_cmd->require_subcommand(1);
  const std::vector<std::string> experiment_names = {"sandwich", "mnist", "rhat-vs-rtilde", "point-mass",
                                                     "symmetric"};
  for (const auto& name : experiment_names) {
    add_experiment_flags(exp_cmd->add_subcommand(name), exp, exp_variant, exp_out, exp_data_dir);
  }

  // theory
  TheoryArgs th;
  auto* theory_cmd = app.add_subcommand("theory", "closed-form bounds and their Monte Carlo checks");
  theory_cmd->require_subcommand(1);
  auto* bounds_cmd = theory_cmd->add_subcommand("bounds", "probability bound vs wedge simulation");
  auto* moments_cmd = theory_cmd->add_subcommand("moments", "integrand moments: closed form, quadrature, sampling");
  auto* sep_cmd = theory_cmd->add_subcommand("separation", "angle after one application for point masses");
  for (auto* c : {bounds_cmd, moments_cmd, sep_cmd}) {
    c->add_option("--seed", th.seed)->capture_default_str();
    c->add_option("--out", th.out, "directory for the CSV (stdout when omitted)");
  }
  bounds_cmd->add_option("--draws", th.draws)->capture_default_str();
  moments_cmd->add_option("--draws", th.draws)->capture_default_str();
  sep_cmd->add_option("--steps", th.steps, "grid points for the separating fraction")->capture_default_str();

  // preprocess
  experiment::PreprocessConfig pre;
  std::string pre_out;
  auto* pre_cmd = app.add_subcommand("preprocess", "linear SVM on raw arcs vs on SCB features");
  pre_cmd->add_option("--m", pre.m)->capture_default_str();
  pre_cmd->add_option("--L", pre.levels)->capture_default_str();
  pre_cmd->add_option("--trials", pre.trials)->capture_default_str();
  pre_cmd->add_option("--points-per-class", pre.points_per_class)->capture_default_str();
  pre_cmd->add_option("--seed-base", pre.seed_base)->capture_default_str();
  pre_cmd->add_option("--lambda", pre.lambda)->capture_default_str();
  pre_cmd->add_option("--epochs", pre.epochs, "upper bound on SVM passes")->capture_default_str();
  pre_cmd->add_option("--out", pre_out, "directory for the report and feature CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      LabeledDataset d;
      if (gen.generator == "sandwich") d = gen_sandwich(gen.n, gen.n2 ? gen.n2 : 2 * gen.n, gen.seed);
      else if (gen.generator == "symmetric") d = gen_symmetric(gen.n, gen.angle, gen.seed);
      else if (gen.generator == "point-masses") d = gen_point_masses(gen.n, gen.n2 ? gen.n2 : gen.n, gen.angle, gen.seed);
      else if (gen.generator == "wedges") d = gen_wedges(gen.angle, gen.angle, gen.angle, gen.n, gen.seed).data;
      else d = gen_arcs(gen.n, gen.seed);
      if (gen.out.empty()) std::cout << io::dataset_csv(d);
      else io::write_dataset_csv(gen.out, d);
      return 0;
    }

    if (train_cmd->parsed()) {
      const LabeledDataset d = io::read_dataset_csv(model_args.data);
      IscbOptions o;
      o.classes = d.classes();
      o.iterations = model_args.iterations;
      o.shapes = {LayerShape{model_args.m, model_args.levels}};
      o.variant = parse_variant(model_args.variant);
      o.seed = model_args.seed;
      InputOptions input;
      input.affine = model_args.affine;
      const IscbModel model = train_on_data(d.points_of(Split::train), d.labels_of(Split::train), o, input);
      io::save_model(model, model_args.model);
      std::cerr << "wrote " << model_args.model << "\n";
      return 0;
    }

    if (eval_cmd->parsed()) {
      const IscbModel model = io::load_model(model_args.model);
      const LabeledDataset d = io::read_dataset_csv(model_args.data);
      Split s = d.indices(Split::test).empty() ? Split::train : Split::test;
      const auto acc = experiment::layer_accuracies(predict_layers(model, encode(model, d.points_of(s))),
                                                    d.labels_of(s));
      std::cout << "K,accuracy\n";
      for (std::size_t k = 0; k < acc.size(); ++k) {
        std::cout << k + 1 << "," << experiment::format_double(acc[k]) << "\n";
      }
      return 0;
    }

    if (exp_cmd->parsed()) {
      exp.variant = parse_variant(exp_variant);
      exp.data_dir = exp_data_dir.empty() ? default_data_dir() : fs::path(exp_data_dir);
      for (const auto& name : experiment_names) {
        if (!exp_cmd->get_subcommand(name)->parsed()) continue;
        exp.name = name;
        experiment::ExperimentReport r;
        if (name == "sandwich") r = experiment::run_sandwich(exp);
        else if (name == "mnist") r = experiment::run_mnist(exp);
        else if (name == "rhat-vs-rtilde") r = experiment::run_rhat_vs_rtilde(exp);
        else if (name == "point-mass") r = experiment::run_point_mass(exp);
        else r = experiment::run_symmetric(exp);
        emit(exp_out, name + ".csv", r.csv());
        std::cerr << r.summary();
      }
      return 0;
    }

    if (theory_cmd->parsed()) {
      if (bounds_cmd->parsed()) {
        const double pi = std::numbers::pi;
        const auto rows = experiment::run_bounds({10, 50, 100}, {10, 25, 50, 100, 200},
                                                 {pi / 16, pi / 8, pi / 4}, th.draws, th.seed);
        emit(th.out, "bounds.csv", experiment::bounds_csv(rows));
        for (const auto& r : rows) {
          if (!r.dominated) return kExitGate;
        }
      } else if (moments_cmd->parsed()) {
        const auto rows = experiment::run_moments(th.draws, th.seed);
        emit(th.out, "moments.csv", experiment::moments_csv(rows));
        for (const auto& r : rows) {
          if (std::abs(r.closed_form - r.quadrature) > 1e-10) return kExitGate;
        }
      } else {
        const auto rows = experiment::run_separation({1.0, 1.2, 2.0, 5.0}, th.steps);
        emit(th.out, "separation.csv", experiment::separation_csv(rows));
      }
      return 0;
    }

    if (pre_cmd->parsed()) {
      if (!pre_out.empty()) pre.feature_dir = pre_out;
      const auto report = experiment::run_preprocess(pre);
      emit(pre_out, fmt::format("preprocess_L{}_m{}.csv", pre.levels, pre.m), report.csv());
      std::cerr << report.summary();
      return report.separability_transfer ? 0 : kExitGate;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
