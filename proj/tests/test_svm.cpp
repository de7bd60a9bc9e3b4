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

#include <random>

#include "doctest.h"
#include "iscb/errors.hpp"
#include "iscb/svm.hpp"

using namespace iscb;

namespace {

struct Problem {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

Problem blobs(int p, double gap, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Problem out{Eigen::MatrixXd(2, p), {}};
  for (int i = 0; i < p; ++i) {
    const int label = i % 2 ? 1 : -1;
    out.x.col(i) << n(rng) + label * gap, n(rng) - label * gap;
    out.y.push_back(label);
  }
  return out;
}

}  // namespace

TEST_SUITE("svm") {

TEST_CASE("separable blobs are fit exactly") {
  const auto pr = blobs(200, 4.0, 1);
  const auto model = train_linear(pr.x, pr.y, {1e-4, 200, 3});
  CHECK(accuracy(model, pr.x, pr.y) == 1.0);
  CHECK(model.weights(0) > 0.0);
  CHECK(model.weights(1) < 0.0);
}

TEST_CASE("objective is no worse than a brute-force grid") {
  const auto pr = blobs(20, 0.6, 2);
  for (double lambda : {0.05, 0.5}) {
    const auto model = train_linear(pr.x, pr.y, {lambda, 500, 1});
    const double mine = hinge_objective(model, pr.x, pr.y);
    double best = 1e300;
    LinearModel probe{Eigen::VectorXd(2), 0.0, lambda, 1, 0};
    for (int a = -40; a <= 40; ++a)
      for (int b = -40; b <= 40; ++b)
        for (int c = -40; c <= 40; ++c) {
          probe.weights << a * 0.05, b * 0.05;
          probe.bias = c * 0.05;
          best = std::min(best, hinge_objective(probe, pr.x, pr.y));
        }
    CHECK(mine <= best + 1e-9);
    CHECK(mine >= best - 0.05);
  }
}

TEST_CASE("training is deterministic in the seed") {
  const auto pr = blobs(100, 0.5, 3);
  const auto a = train_linear(pr.x, pr.y, {1e-3, 20, 7});
  const auto b = train_linear(pr.x, pr.y, {1e-3, 20, 7});
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("prediction on the boundary is positive") {
  const LinearModel m{Eigen::Vector2d(1.0, -1.0), 0.0, 1e-4, 1, 0};
  CHECK(predict(m, Eigen::Vector2d(2.0, 2.0)) == 1);
  CHECK(predict(m, Eigen::Vector2d(1.0, 2.0)) == -1);
  CHECK_THROWS_AS(predict(m, Eigen::Vector3d(1, 2, 3)), Error);
}

TEST_CASE("bad inputs") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(2, 4);
  try {
    train_linear(x, {1, 1, 1, 1});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_labels);
  }
  CHECK_THROWS_AS(train_linear(x, {1, -1, 2, 1}), Error);
  CHECK_THROWS_AS(train_linear(x, {1, -1}), Error);
  CHECK_THROWS_AS(train_linear(x, {1, -1, 1, -1}, {0.0, 10, 0}), Error);
}

}  // TEST_SUITE
