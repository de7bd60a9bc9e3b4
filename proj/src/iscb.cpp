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

#include "iscb/iscb.hpp"

#include <string>
#include <utility>

#include "iscb/errors.hpp"
#include "parallel.hpp"

namespace iscb {

LayerShape IscbOptions::shape(int layer) const {
  if (shapes.size() == 1) return shapes.front();
  if (shapes.size() == static_cast<std::size_t>(iterations) && layer >= 1 && layer <= iterations) {
    return shapes[static_cast<std::size_t>(layer - 1)];
  }
  throw Error(ErrorKind::configuration, "need one layer shape or one per iteration");
}

IscbModel::IscbModel(std::vector<ScbModel> layers, std::vector<MeasurementMatrix> transitions,
                     Variant variant, Seed seed)
    : layers_(std::move(layers)), transitions_(std::move(transitions)), variant_(variant), seed_(seed) {
  if (layers_.empty()) throw Error(ErrorKind::invalid_iteration, "model needs at least one layer");
  if (transitions_.size() + 1 != layers_.size()) {
    throw Error(ErrorKind::consistency, "need exactly one transition between consecutive layers");
  }
  for (int k = 1; k <= iterations(); ++k) {
    if (layer(k).classes() != classes()) {
      throw Error(ErrorKind::consistency, "all layers must share the class count");
    }
    if (k < iterations()) {
      const auto& t = transitions_[static_cast<std::size_t>(k - 1)];
      if (t.cols() != feature_width(k) || t.rows() != layer(k + 1).measurements()) {
        throw Error(ErrorKind::consistency,
                    "transition " + std::to_string(k) + " does not connect its layers");
      }
    }
  }
}

Index IscbModel::feature_width(int k) const {
  const ScbModel& l = layer(k);
  return variant_ == Variant::rtilde ? l.classes() : static_cast<Index>(l.levels()) * l.classes();
}

void IscbModel::set_input_measurement(MeasurementMatrix a) {
  if (a.rows() != layer(1).measurements()) {
    throw Error(ErrorKind::consistency, "input measurement rows must equal layer-1 m");
  }
  input_ = std::move(a);
}

namespace {

struct LayerPass {
  std::vector<ClassId> predictions;
  Eigen::MatrixXd features;
};

// Scores every column once, producing both the layer's predictions and the
// features handed to the next layer.
LayerPass run_layer(const ScbModel& layer, const SignMatrix& q, Variant variant) {
  const Index width = variant == Variant::rtilde
                          ? layer.classes()
                          : static_cast<Index>(layer.levels()) * layer.classes();
  LayerPass out;
  out.predictions.resize(static_cast<std::size_t>(q.cols()));
  out.features.resize(width, q.cols());
  detail::parallel_for(static_cast<std::size_t>(q.cols()), [&](std::size_t j) {
    const auto col = static_cast<Index>(j);
    const LevelScores s = score_levels(layer, q.column(col));
    const ScoreVector r = s.marginal();
    out.predictions[j] = argmax_class(r.values);
    const std::vector<double>& f = variant == Variant::rtilde ? r.values : s.values;
    for (Index i = 0; i < width; ++i) out.features(i, col) = f[static_cast<std::size_t>(i)];
  });
  return out;
}

Eigen::VectorXd layer_features(const ScbModel& layer, std::span<const SignCode> code,
                               Variant variant, ScoreVector* marginal) {
  const LevelScores s = score_levels(layer, code);
  ScoreVector r = s.marginal();
  const std::vector<double>& f = variant == Variant::rtilde ? r.values : s.values;
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Index>(f.size()));
  if (marginal) *marginal = std::move(r);
  return v;
}

}  // namespace

IscbModel train_iterative(const SignMatrix& q, std::span<const ClassId> labels,
                          const IscbOptions& options) {
  if (options.iterations < 1) {
    throw Error(ErrorKind::invalid_iteration, "iteration count must be at least 1");
  }
  if (options.classes < 2) throw Error(ErrorKind::configuration, "need at least two classes");
  if (options.shape(1).measurements != q.rows()) {
    throw Error(ErrorKind::invalid_dimension, "layer 1 expects codes of length " +
                                                  std::to_string(options.shape(1).measurements) +
                                                  ", got " + std::to_string(q.rows()));
  }
  std::vector<ScbModel> layers;
  std::vector<MeasurementMatrix> transitions;
  SignMatrix codes = q;
  for (int k = 1; k <= options.iterations; ++k) {
    const LayerShape shape = options.shape(k);
    TuplePlan plan = sample_tuples(shape.levels, shape.measurements,
                                   derive_seed(options.seed, stream::tuple_plan,
                                               static_cast<std::uint64_t>(k)));
    layers.push_back(train(codes, labels, options.classes, std::move(plan)));
    if (k == options.iterations) break;

    LayerPass pass = run_layer(layers.back(), codes, options.variant);
    const Index next_m = options.shape(k + 1).measurements;
    if (options.reuse_transition && !transitions.empty()) {
      const MeasurementMatrix& first = transitions.front();
      if (first.rows() != next_m || first.cols() != pass.features.rows()) {
        throw Error(ErrorKind::configuration, "cannot reuse a transition across layer shapes");
      }
      transitions.push_back(first);
    } else {
      transitions.push_back(mixed_sign_matrix(
          next_m, pass.features.rows(),
          derive_seed(options.seed, stream::transition, static_cast<std::uint64_t>(k))));
    }
    codes = binarize(transitions.back(), pass.features);
  }
  return IscbModel(std::move(layers), std::move(transitions), options.variant, options.seed);
}

std::vector<ScoreVector> trace_iterative(const IscbModel& model, std::span<const SignCode> code) {
  std::vector<ScoreVector> trace;
  std::vector<SignCode> current(code.begin(), code.end());
  for (int k = 1; k <= model.iterations(); ++k) {
    ScoreVector r;
    const Eigen::VectorXd f = layer_features(model.layer(k), current, model.variant(), &r);
    trace.push_back(std::move(r));
    if (k < model.iterations()) {
      current = binarize_column(model.transitions()[static_cast<std::size_t>(k - 1)], f);
    }
  }
  return trace;
}

ScoreVector score_iterative(const IscbModel& model, std::span<const SignCode> code) {
  return trace_iterative(model, code).back();
}

ClassId classify_iterative(const IscbModel& model, std::span<const SignCode> code) {
  return argmax_class(score_iterative(model, code).values);
}

LevelScores rhat_features(const IscbModel& model, int layer, std::span<const SignCode> code) {
  if (model.variant() != Variant::rhat) {
    throw Error(ErrorKind::configuration, "per-level features belong to r^ models");
  }
  if (layer < 1 || layer > model.iterations()) {
    throw Error(ErrorKind::invalid_iteration, "layer " + std::to_string(layer) + " out of range");
  }
  return score_levels(model.layer(layer), code);
}

std::vector<std::vector<ClassId>> predict_layers(const IscbModel& model, const SignMatrix& q) {
  std::vector<std::vector<ClassId>> out;
  SignMatrix codes = q;
  for (int k = 1; k <= model.iterations(); ++k) {
    LayerPass pass = run_layer(model.layer(k), codes, model.variant());
    out.push_back(std::move(pass.predictions));
    if (k < model.iterations()) {
      codes = binarize(model.transitions()[static_cast<std::size_t>(k - 1)], pass.features);
    }
  }
  return out;
}

IscbModel train_on_data(const Eigen::MatrixXd& x, std::span<const ClassId> labels,
                        const IscbOptions& options, const InputOptions& input) {
  if (x.cols() == 0) throw Error(ErrorKind::empty_data, "no training points");
  const Index m = options.shape(1).measurements;
  MeasurementMatrix a = gaussian_matrix(m, x.rows(), derive_seed(options.seed, stream::input_measurement, 0));
  if (input.affine) {
    Eigen::VectorXd lo = input.box_lo.size() ? input.box_lo : Eigen::VectorXd(x.rowwise().minCoeff());
    Eigen::VectorXd hi = input.box_hi.size() ? input.box_hi : Eigen::VectorXd(x.rowwise().maxCoeff());
    a = with_affine_offsets(std::move(a), lo, hi, derive_seed(options.seed, stream::affine_offsets, 0));
  }
  IscbModel model = train_iterative(binarize(a, x), labels, options);
  model.set_input_measurement(std::move(a));
  return model;
}

SignMatrix encode(const IscbModel& model, const Eigen::MatrixXd& x) {
  if (!model.input_measurement()) {
    throw Error(ErrorKind::configuration, "model was trained on codes, not raw data");
  }
  return binarize(*model.input_measurement(), x);
}

ClassId predict(const IscbModel& model, const Eigen::VectorXd& x) {
  if (!model.input_measurement()) {
    throw Error(ErrorKind::configuration, "model was trained on codes, not raw data");
  }
  return classify_iterative(model, binarize_column(*model.input_measurement(), x));
}

}  // namespace iscb
