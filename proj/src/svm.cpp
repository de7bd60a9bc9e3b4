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

#include "iscb/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>

#include "iscb/errors.hpp"

namespace iscb {
namespace {

using Index = Eigen::Index;

void check_inputs(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.cols()) != y.size()) {
    throw Error(ErrorKind::invalid_dimension, "one label per column required");
  }
  for (int v : y) {
    if (v != 1 && v != -1) throw Error(ErrorKind::label, "labels must be -1 or +1");
  }
}

double decision(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.weights.dot(x) + model.bias;
}

}  // namespace

// Minimizes lambda/2 (|w|^2 + b^2) + mean_i max(0, 1 - y_i (<w, x_i> + b)) by
// dual coordinate descent (the bias is an extra constant feature). Each epoch
// visits the points in a seeded random order; training stops early once the
// largest projected-gradient violation drops below 1e-8.
LinearModel train_linear(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LinearOptions& options) {
  check_inputs(x, y);
  if (x.cols() < 2 || std::count(y.begin(), y.end(), 1) == 0 ||
      std::count(y.begin(), y.end(), -1) == 0) {
    throw Error(ErrorKind::degenerate_labels, "both labels must occur in the training set");
  }
  if (!(options.lambda > 0.0) || options.epochs < 1) {
    throw Error(ErrorKind::configuration, "need lambda > 0 and at least one epoch");
  }
  const Index d = x.rows();
  const Index p = x.cols();
  const double upper = 1.0 / (options.lambda * static_cast<double>(p));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  std::vector<double> alpha(static_cast<std::size_t>(p), 0.0);
  std::vector<double> sq_norm(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) sq_norm[static_cast<std::size_t>(i)] = x.col(i).squaredNorm() + 1.0;

  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  Engine rng = make_engine(options.seed, stream::svm, 0);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    for (std::size_t k = order.size(); k > 1; --k) {
      boost::random::uniform_int_distribution<std::size_t> pick(0, k - 1);
      std::swap(order[k - 1], order[pick(rng)]);
    }
    double worst = 0.0;
    for (Index i : order) {
      const auto ui = static_cast<std::size_t>(i);
      const double yi = y[ui];
      const double grad = yi * (w.dot(x.col(i)) + b) - 1.0;
      double projected = grad;
      if (alpha[ui] <= 0.0) projected = std::min(grad, 0.0);
      else if (alpha[ui] >= upper) projected = std::max(grad, 0.0);
      worst = std::max(worst, std::abs(projected));
      if (projected == 0.0) continue;
      const double old = alpha[ui];
      alpha[ui] = std::clamp(old - grad / sq_norm[ui], 0.0, upper);
      const double step = (alpha[ui] - old) * yi;
      w += step * x.col(i);
      b += step;
    }
    if (worst < 1e-8) break;
  }
  return {std::move(w), b, options.lambda, options.epochs, options.seed};
}

int predict(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != model.weights.size()) {
    throw Error(ErrorKind::invalid_dimension, "feature dimension does not match the model");
  }
  return decision(model, x) >= 0.0 ? 1 : -1;
}

double hinge_objective(const LinearModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  check_inputs(x, y);
  double loss = 0.0;
  for (Index i = 0; i < x.cols(); ++i) {
    loss += std::max(0.0, 1.0 - y[static_cast<std::size_t>(i)] * decision(model, x.col(i)));
  }
  const double reg = model.weights.squaredNorm() + model.bias * model.bias;
  return 0.5 * model.lambda * reg + loss / static_cast<double>(std::max<Index>(1, x.cols()));
}

double accuracy(const LinearModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y) {
  check_inputs(x, y);
  if (x.cols() == 0) throw Error(ErrorKind::empty_data, "no points to evaluate");
  Index correct = 0;
  for (Index i = 0; i < x.cols(); ++i) {
    if (predict(model, x.col(i)) == y[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(x.cols());
}

}  // namespace iscb
