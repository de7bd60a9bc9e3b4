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

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "iscb/random.hpp"
#include "iscb/scb.hpp"

namespace iscb {

enum class Split { train, test };

/// Points are columns of a d x p matrix.
struct LabeledDataset {
  Eigen::MatrixXd points;
  std::vector<ClassId> labels;
  std::vector<Split> split;
  std::string generator;
  std::map<std::string, double> params;
  Seed seed = 0;

  Index dimension() const { return points.rows(); }
  Index size() const { return points.cols(); }
  int classes() const;

  std::vector<Index> indices(Split s) const;
  Eigen::MatrixXd points_of(Split s) const;
  std::vector<ClassId> labels_of(Split s) const;
};

/// count1 copies of a unit vector at angle phi and count2 copies at
/// phi + angle12, inside the positive quadrant. The test split repeats both
/// positions once per training copy.
LabeledDataset gen_point_masses(int count1, int count2, double angle12, Seed seed);

/// n class-1 points strictly above y = x (polar angle in (pi/4, pi/4 + spread])
/// and their exact mirror images as class 2. All points are training points.
LabeledDataset gen_symmetric(int n, double spread, Seed seed);

/// Three angular bands seen from the origin: red (class 1), blue (class 2),
/// red. Every split holds n_blue blue and n_red red points, half of the red
/// ones on each side of the blue band.
LabeledDataset gen_sandwich(int n_blue, int n_red, Seed seed);

struct WedgeDataset {
  LabeledDataset data;
  Eigen::Vector2d x1;  // inner edge of G1
  Eigen::Vector2d x2;  // inner edge of G2
  double start = 0.0;  // polar angle where G1 begins
};

/// Uniform polar angles inside G1 = [s, s + a1] and G2 = [s + a1 + a12, s + a1 + a12 + a2]
/// on the unit circle, centred in the positive quadrant.
WedgeDataset gen_wedges(double a1, double a2, double a12, int count, Seed seed);

/// Two parallel upper arcs (radius 1, radial thickness 0.2), the second one
/// shifted down by 0.35, translated into the positive quadrant. n points per
/// class, alternately assigned to train and test.
LabeledDataset gen_arcs(int n, Seed seed);

}  // namespace iscb
