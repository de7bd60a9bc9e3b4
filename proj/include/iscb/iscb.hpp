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

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "iscb/quantize.hpp"
#include "iscb/scb.hpp"

namespace iscb {

struct LayerShape {
  int measurements = 0;
  int levels = 0;
};

struct IscbOptions {
  int classes = 0;
  int iterations = 1;
  /// One entry applies to every layer; otherwise exactly `iterations` entries.
  /// Layer 1's measurement count must equal the code length of the input.
  std::vector<LayerShape> shapes;
  Variant variant = Variant::rtilde;
  Seed seed = 0;
  /// Reuse the first transition matrix for every later layer.
  bool reuse_transition = false;

  LayerShape shape(int layer) const;  // 1-based layer
};

/// K stacked SCB layers. transitions()[k - 1] is the mixed-sign matrix that
/// re-binarizes layer k's scores into layer k + 1's codes (K - 1 of them).
/// An optional input measurement maps raw data to layer-1 codes.
class IscbModel {
 public:
  IscbModel() = default;
  IscbModel(std::vector<ScbModel> layers, std::vector<MeasurementMatrix> transitions,
            Variant variant, Seed seed);

  int iterations() const { return static_cast<int>(layers_.size()); }
  int classes() const { return layers_.front().classes(); }
  Variant variant() const { return variant_; }
  Seed seed() const { return seed_; }
  const std::vector<ScbModel>& layers() const { return layers_; }
  const ScbModel& layer(int k) const { return layers_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<MeasurementMatrix>& transitions() const { return transitions_; }

  /// Width of layer k's output features: G for r~, L_k * G for r^.
  Index feature_width(int k) const;

  const std::optional<MeasurementMatrix>& input_measurement() const { return input_; }
  void set_input_measurement(MeasurementMatrix a);

  friend bool operator==(const IscbModel&, const IscbModel&) = default;

 private:
  std::vector<ScbModel> layers_;
  std::vector<MeasurementMatrix> transitions_;
  Variant variant_ = Variant::rtilde;
  Seed seed_ = 0;
  std::optional<MeasurementMatrix> input_;
};

IscbModel train_iterative(const SignMatrix& q, std::span<const ClassId> labels,
                          const IscbOptions& options);

ScoreVector score_iterative(const IscbModel& model, std::span<const SignCode> code);
ClassId classify_iterative(const IscbModel& model, std::span<const SignCode> code);

/// r~ after every layer, in order; the last entry equals score_iterative.
std::vector<ScoreVector> trace_iterative(const IscbModel& model, std::span<const SignCode> code);

/// Per-level scores of layer k for a code entering that layer. Only defined
/// for r^ models (throws `configuration` otherwise).
LevelScores rhat_features(const IscbModel& model, int layer, std::span<const SignCode> code);

/// Predictions of every layer for every column: result[k - 1][j].
std::vector<std::vector<ClassId>> predict_layers(const IscbModel& model, const SignMatrix& q);

// Raw-data entry points: layer 1 consumes sign(A x) for a Gaussian A drawn
// from the model seed (optionally with affine offsets inside a box).
struct InputOptions {
  bool affine = false;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
};

IscbModel train_on_data(const Eigen::MatrixXd& x, std::span<const ClassId> labels,
                        const IscbOptions& options, const InputOptions& input = {});
SignMatrix encode(const IscbModel& model, const Eigen::MatrixXd& x);
ClassId predict(const IscbModel& model, const Eigen::VectorXd& x);

}  // namespace iscb
