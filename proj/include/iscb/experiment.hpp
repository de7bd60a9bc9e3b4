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

#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "iscb/datagen.hpp"
#include "iscb/random.hpp"
#include "iscb/scb.hpp"

namespace iscb::experiment {

struct ExperimentConfig {
  std::string name;
  int m = 500;
  int levels = 1;
  int iterations = 1;
  Variant variant = Variant::rtilde;
  Seed seed_base = 1;
  int trials = 10;
  int train_per_class = 200;
  int test_per_class = 100;
  std::filesystem::path data_dir;

  /// Trial t runs with seed_base + t.
  std::vector<Seed> seeds() const;
  void validate() const;  // throws `configuration`
};

/// Test accuracy of one model family after each application K = 1..iterations.
struct AccuracySeries {
  std::string label;
  std::vector<std::vector<double>> per_trial;  // [trial][K - 1]

  std::vector<double> mean() const;
};

struct ExperimentReport {
  std::string name;
  std::vector<AccuracySeries> series;
  std::vector<std::pair<std::string, std::string>> notes;

  const AccuracySeries& find(const std::string& label) const;
  /// series,trial,K,accuracy rows followed by series,mean,K,accuracy rows.
  std::string csv() const;
  std::string summary() const;
};

/// Accuracy of the argmax after each layer of one K-layer model; the first k
/// layers of that model are exactly a k-layer model with the same seed.
std::vector<double> layer_accuracies(const std::vector<std::vector<ClassId>>& predictions,
                                     const std::vector<ClassId>& truth);

ExperimentReport run_sandwich(const ExperimentConfig& config);
ExperimentReport run_mnist(const ExperimentConfig& config);
/// Runs the r~ and r^ variants on identical subsets and seeds.
ExperimentReport run_rhat_vs_rtilde(const ExperimentConfig& config);
ExperimentReport run_point_mass(const ExperimentConfig& config);
ExperimentReport run_symmetric(const ExperimentConfig& config);

struct MnistSubset {
  Eigen::MatrixXd train;
  std::vector<ClassId> train_labels;
  Eigen::MatrixXd test;
  std::vector<ClassId> test_labels;
};

/// Per digit: seeded shuffle, first `train_per_class` for training, the next
/// `test_per_class` for testing.
MnistSubset select_mnist(const Eigen::MatrixXd& images, const std::vector<ClassId>& labels,
                         int train_per_class, int test_per_class, Seed seed);

// Theory tables.
struct BoundRow {
  int k = 0;
  int j = 0;
  double a = 0.0;
  double bound = 0.0;       // clamped at 1
  double bound_raw = 0.0;
  double empirical = 0.0;   // P(theta <= a)
  double empirical_se = 0.0;
  double mean_angle = 0.0;
  bool dominated = false;   // bound_raw >= empirical - 3 se
};

std::vector<BoundRow> run_bounds(const std::vector<int>& ks, const std::vector<int>& js,
                                 const std::vector<double>& thresholds, std::size_t draws, Seed seed);
std::string bounds_csv(const std::vector<BoundRow>& rows);

struct MomentRow {
  std::string integrand;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double monte_carlo = 0.0;
  double monte_carlo_se = 0.0;
};

std::vector<MomentRow> run_moments(std::size_t draws, Seed seed);
std::string moments_csv(const std::vector<MomentRow>& rows);

struct SeparationRow {
  double mass_ratio = 0.0;
  double fraction = 0.0;
  double angle = 0.0;
};

std::vector<SeparationRow> run_separation(const std::vector<double>& ratios, int steps);
std::string separation_csv(const std::vector<SeparationRow>& rows);

// SCB as preprocessing for a linear SVM on the arc data.
struct PreprocessTrial {
  double raw_train = 0.0;
  double raw_test = 0.0;
  double scb_train = 0.0;
  double scb_test = 0.0;
  double feature_train = 0.0;
  double feature_test = 0.0;
};

struct PreprocessReport {
  int levels = 0;
  int m = 0;
  std::vector<PreprocessTrial> trials;
  /// Every trial where SCB classified all training points also gave a
  /// feature-space SVM with 100% training accuracy.
  bool separability_transfer = true;
  std::size_t perfect_scb_trials = 0;

  PreprocessTrial mean() const;
  std::string csv() const;
  std::string summary() const;
};

struct PreprocessConfig {
  int levels = 1;
  int m = 100;
  int points_per_class = 400;
  Seed seed_base = 1;
  int trials = 10;
  double lambda = 1e-4;
  int epochs = 200;
  /// When set, the first trial's r~ features are written here as CSV.
  std::filesystem::path feature_dir;
};

PreprocessReport run_preprocess(const PreprocessConfig& config);

/// "mean K=k" columns etc. use fixed six-decimal formatting.
std::string format_double(double v);

}  // namespace iscb::experiment
