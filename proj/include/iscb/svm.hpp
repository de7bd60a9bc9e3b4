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

#include <vector>

#include <Eigen/Core>

#include "iscb/random.hpp"

namespace iscb {

/// Binary linear classifier sign(<w, x> + b) fitted by minimizing the
/// L2-regularized hinge loss (dual coordinate descent, bias regularized too).
struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 1e-4;
  int epochs = 200;  // upper bound on passes over the data
  Seed seed = 0;
};

struct LinearOptions {
  double lambda = 1e-4;
  int epochs = 200;  // upper bound on passes over the data
  Seed seed = 0;
};

/// x is d x p, y in {-1, +1}. Throws `degenerate_labels` unless both labels
/// occur, `invalid_dimension` on shape mismatch.
LinearModel train_linear(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const LinearOptions& options = {});

/// sign(0) = +1.
int predict(const LinearModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

double hinge_objective(const LinearModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y);

double accuracy(const LinearModel& model, const Eigen::MatrixXd& x, const std::vector<int>& y);

}  // namespace iscb
