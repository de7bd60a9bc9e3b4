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

#include "iscb/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "iscb/errors.hpp"

namespace iscb {
namespace {

using Uniform = boost::random::uniform_real_distribution<double>;

constexpr double kPi = std::numbers::pi;

struct Builder {
  std::vector<Eigen::Vector2d> points;
  std::vector<ClassId> labels;
  std::vector<Split> split;

  void add(const Eigen::Vector2d& x, ClassId label, Split s) {
    points.push_back(x);
    labels.push_back(label);
    split.push_back(s);
  }

  LabeledDataset finish(std::string generator, std::map<std::string, double> params, Seed seed) {
    LabeledDataset d;
    d.points.resize(2, static_cast<Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) d.points.col(static_cast<Index>(k)) = points[k];
    d.labels = std::move(labels);
    d.split = std::move(split);
    d.generator = std::move(generator);
    d.params = std::move(params);
    d.seed = seed;
    return d;
  }
};

Eigen::Vector2d polar(double radius, double theta) {
  return {radius * std::cos(theta), radius * std::sin(theta)};
}

}  // namespace

int LabeledDataset::classes() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

std::vector<Index> LabeledDataset::indices(Split s) const {
  std::vector<Index> out;
  for (std::size_t k = 0; k < split.size(); ++k) {
    if (split[k] == s) out.push_back(static_cast<Index>(k));
  }
  return out;
}

Eigen::MatrixXd LabeledDataset::points_of(Split s) const {
  const auto idx = indices(s);
  Eigen::MatrixXd out(points.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = points.col(idx[k]);
  return out;
}

std::vector<ClassId> LabeledDataset::labels_of(Split s) const {
  std::vector<ClassId> out;
  for (Index k : indices(s)) out.push_back(labels[static_cast<std::size_t>(k)]);
  return out;
}

LabeledDataset gen_point_masses(int count1, int count2, double angle12, Seed seed) {
  if (count1 < 1 || count2 < 1) throw Error(ErrorKind::configuration, "point masses need >= 1 point");
  if (!(angle12 > 0.0 && angle12 < kPi / 2)) {
    throw Error(ErrorKind::configuration, "separation angle must lie in (0, pi/2)");
  }
  // The two masses sit symmetrically around the quadrant's bisector.
  const double phi = kPi / 4 - angle12 / 2;
  const Eigen::Vector2d x1 = polar(1.0, phi);
  const Eigen::Vector2d x2 = polar(1.0, phi + angle12);
  Builder b;
  for (Split s : {Split::train, Split::test}) {
    for (int k = 0; k < count1; ++k) b.add(x1, 1, s);
    for (int k = 0; k < count2; ++k) b.add(x2, 2, s);
  }
  return b.finish("point_masses",
                  {{"count1", count1}, {"count2", count2}, {"angle12", angle12}, {"phi", phi}}, seed);
}

LabeledDataset gen_symmetric(int n, double spread, Seed seed) {
  if (n < 1) throw Error(ErrorKind::configuration, "need at least one point per class");
  if (!(spread > 0.0 && spread <= kPi / 4)) {
    throw Error(ErrorKind::configuration, "spread must lie in (0, pi/4]");
  }
  Engine rng = make_engine(seed, stream::dataset, 0);
  Builder b;
  std::vector<Eigen::Vector2d> upper;
  for (int k = 0; k < n; ++k) {
    // 1 - u lies in (0, 1], keeping every point strictly above y = x.
    const double theta = kPi / 4 + spread * (1.0 - Uniform(0.0, 1.0)(rng));
    upper.push_back(polar(Uniform(0.5, 1.5)(rng), theta));
  }
  for (const auto& x : upper) b.add(x, 1, Split::train);
  for (const auto& x : upper) b.add(Eigen::Vector2d(x.y(), x.x()), 2, Split::train);
  return b.finish("symmetric", {{"n", n}, {"spread", spread}}, seed);
}

LabeledDataset gen_sandwich(int n_blue, int n_red, Seed seed) {
  if (n_blue < 1 || n_red < 2 || n_red % 2 != 0) {
    throw Error(ErrorKind::configuration, "sandwich needs n_blue >= 1 and an even n_red >= 2");
  }
  constexpr double kHalfWidthDeg = 10.0;
  constexpr double kJitterDeg = 2.0;
  Engine rng = make_engine(seed, stream::dataset, 0);
  boost::random::normal_distribution<double> jitter(0.0, kJitterDeg);
  Builder b;
  struct Band {
    double center_deg;
    int count;
    ClassId label;
  };
  for (Split s : {Split::train, Split::test}) {
    for (const Band band : {Band{20.0, n_red / 2, 1}, Band{45.0, n_blue, 2}, Band{70.0, n_red / 2, 1}}) {
      for (int k = 0; k < band.count; ++k) {
        const double deg = band.center_deg + Uniform(-kHalfWidthDeg, kHalfWidthDeg)(rng) + jitter(rng);
        b.add(polar(Uniform(0.5, 1.5)(rng), deg * kPi / 180.0), band.label, s);
      }
    }
  }
  return b.finish("sandwich",
                  {{"n_blue", n_blue},
                   {"n_red", n_red},
                   {"band_centers_deg", 20.0},
                   {"band_step_deg", 25.0},
                   {"band_half_width_deg", kHalfWidthDeg},
                   {"jitter_deg", kJitterDeg}},
                  seed);
}

WedgeDataset gen_wedges(double a1, double a2, double a12, int count, Seed seed) {
  if (!(a1 > 0 && a2 > 0 && a12 > 0) || a1 + a2 + a12 >= kPi / 2) {
    throw Error(ErrorKind::configuration, "wedges must be disjoint inside the positive quadrant");
  }
  if (count < 1) throw Error(ErrorKind::configuration, "need at least one point per wedge");
  const double start = (kPi / 2 - (a1 + a2 + a12)) / 2;
  const double g2_start = start + a1 + a12;
  Engine rng = make_engine(seed, stream::dataset, 0);
  Builder b;
  for (int k = 0; k < count; ++k) b.add(polar(1.0, start + a1 * Uniform(0.0, 1.0)(rng)), 1, Split::train);
  for (int k = 0; k < count; ++k) b.add(polar(1.0, g2_start + a2 * Uniform(0.0, 1.0)(rng)), 2, Split::train);
  WedgeDataset out;
  out.data = b.finish("wedges", {{"a1", a1}, {"a2", a2}, {"a12", a12}, {"count", count}}, seed);
  out.x1 = polar(1.0, start + a1);
  out.x2 = polar(1.0, g2_start);
  out.start = start;
  return out;
}

LabeledDataset gen_arcs(int n, Seed seed) {
  if (n < 1) throw Error(ErrorKind::configuration, "need at least one point per class");
  constexpr double kThickness = 0.1;  // radial half-width
  constexpr double kShift = 0.35;
  constexpr double kTrim = 0.2;       // arc runs over [kTrim, pi - kTrim]
  const Eigen::Vector2d offset(1.2, 0.5);
  Engine rng = make_engine(seed, stream::dataset, 0);
  Builder b;
  for (ClassId label : {1, 2}) {
    const Eigen::Vector2d down(0.0, label == 1 ? 0.0 : kShift);
    for (int k = 0; k < n; ++k) {
      const double t = Uniform(kTrim, kPi - kTrim)(rng);
      const double r = 1.0 + Uniform(-kThickness, kThickness)(rng);
      b.add(polar(r, t) - down + offset, label, k % 2 == 0 ? Split::train : Split::test);
    }
  }
  return b.finish("arcs",
                  {{"n", n}, {"radius", 1.0}, {"thickness", 2 * kThickness}, {"shift", kShift},
                   {"trim", kTrim}, {"offset_x", offset.x()}, {"offset_y", offset.y()}},
                  seed);
}

}  // namespace iscb
