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

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls the library's scoring code: tables
// are rebuilt by enumerating every pattern of every tuple and counting
// classes with plain loops.

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Core>

#include "iscb/quantize.hpp"
#include "iscb/scb.hpp"

namespace oracle {

using Codes = std::vector<std::vector<int>>;  // [point][row], entries +-1

/// Pattern written as one '+' or '-' per tuple position.
inline std::string pattern_string(const std::vector<int>& code, std::span<const std::uint32_t> tuple) {
  std::string s;
  for (auto r : tuple) s.push_back(code[r] > 0 ? '+' : '-');
  return s;
}

/// The library packs tuple position b into bit b.
inline std::string pattern_string(iscb::Pattern t, int width) {
  std::string s;
  for (int b = 0; b < width; ++b) s.push_back((t >> b) & 1u ? '+' : '-');
  return s;
}

using Key = std::tuple<int, int, std::string>;  // level, measurement, pattern

struct Table {
  std::map<Key, std::vector<double>> scores;
  std::map<Key, std::vector<int>> counts;
};

inline std::vector<std::string> all_patterns(int width) {
  std::vector<std::string> out{""};
  for (int b = 0; b < width; ++b) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      next.push_back(s + '+');
      next.push_back(s + '-');
    }
    out = next;
  }
  return out;
}

/// Literal evaluation of r_g = (P_g / P) * (sum_j |P_g - P_j|) / P.
inline std::vector<double> literal_membership(const std::vector<int>& counts) {
  double total = 0;
  for (int c : counts) total += c;
  std::vector<double> r;
  for (int g : counts) {
    double spread = 0;
    for (int h : counts) spread += std::fabs(double(g) - double(h));
    r.push_back((g / total) * (spread / total));
  }
  return r;
}

inline Table brute_force_table(const Codes& codes, const std::vector<int>& labels, int classes,
                               const iscb::TuplePlan& plan) {
  Table t;
  for (int level = 1; level <= plan.levels(); ++level) {
    for (int i = 0; i < plan.measurements(); ++i) {
      const auto tuple = plan.tuple(level, i);
      for (const auto& pat : all_patterns(level)) {
        std::vector<int> counts(classes, 0);
        for (std::size_t j = 0; j < codes.size(); ++j) {
          if (pattern_string(codes[j], tuple) == pat) ++counts[labels[j] - 1];
        }
        int total = 0;
        for (int c : counts) total += c;
        if (total == 0) continue;
        t.counts[{level, i, pat}] = counts;
        t.scores[{level, i, pat}] = literal_membership(counts);
      }
    }
  }
  return t;
}

/// Normalized score of one code against an oracle table.
inline std::vector<double> brute_force_score(const Table& t, const std::vector<int>& code, int classes,
                                             const iscb::TuplePlan& plan) {
  std::vector<double> r(classes, 0.0);
  for (int level = 1; level <= plan.levels(); ++level) {
    for (int i = 0; i < plan.measurements(); ++i) {
      auto it = t.scores.find({level, i, pattern_string(code, plan.tuple(level, i))});
      if (it == t.scores.end()) continue;
      for (int g = 0; g < classes; ++g) r[g] += it->second[g];
    }
  }
  for (auto& v : r) v /= double(plan.levels()) * plan.measurements();
  return r;
}

inline Codes to_codes(const iscb::SignMatrix& q) {
  Codes out(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) out[j].push_back(q(i, j));
  }
  return out;
}

/// Level-1 plan where tuple i is hyperplane i.
inline iscb::TuplePlan identity_plan(int m) {
  std::vector<std::uint32_t> flat;
  for (int i = 0; i < m; ++i) flat.push_back(static_cast<std::uint32_t>(i));
  return iscb::TuplePlan(m, {flat});
}

/// Unit normals through the origin for two directions at polar angles phi1 <
/// phi2 in the positive quadrant: the first `j` separate them, the remaining
/// m - j have both on their nonnegative side.
inline Eigen::MatrixXd point_mass_normals(double phi1, double phi2, int m, int j) {
  Eigen::MatrixXd a(m, 2);
  const double mid = 0.5 * (phi1 + phi2);
  for (int i = 0; i < m; ++i) {
    // Separating: normal perpendicular to the bisector; otherwise along it.
    const double psi = i < j ? mid + std::numbers::pi / 2 : mid;
    // Spread the normals a little so rows are not identical.
    const double wiggle = 1e-3 * (i + 1) * (phi2 - phi1);
    a(i, 0) = std::cos(psi + (i < j ? 0.0 : wiggle));
    a(i, 1) = std::sin(psi + (i < j ? 0.0 : wiggle));
  }
  return a;
}

/// Mirrored hyperplane pairs for data symmetric about y = x. Line i lies at
/// polar angle phi_i in (pi/4, pi/2) with normal (-sin, cos) ("+" above it);
/// its partner has the coordinate-swapped normal, so mirrored points get
/// identical codes.
inline Eigen::MatrixXd mirrored_pairs(const std::vector<double>& phis) {
  Eigen::MatrixXd a(2 * static_cast<Eigen::Index>(phis.size()), 2);
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(2 * k);
    a(i, 0) = -std::sin(phis[k]);
    a(i, 1) = std::cos(phis[k]);
    a(i + 1, 0) = std::cos(phis[k]);
    a(i + 1, 1) = -std::sin(phis[k]);
  }
  return a;
}

/// Score margin between a point's own class and the other one, predicted
/// from first principles for the mirrored construction: every pair whose
/// upper line lies between the point and y = x adds 1 + ((n - s)/(n + s))^2,
/// where s counts class-1 points below that line; every other pair adds 0.
inline double mirrored_margin(const Eigen::MatrixXd& class1, const Eigen::Vector2d& x,
                              const std::vector<double>& phis, int* inner = nullptr) {
  const double n = static_cast<double>(class1.cols());
  const double theta_x = std::atan2(std::max(x.x(), x.y()), std::min(x.x(), x.y()));
  double total = 0.0;
  int j = 0;
  for (double phi : phis) {
    if (!(phi < theta_x)) continue;
    ++j;
    double s = 0;
    for (Eigen::Index c = 0; c < class1.cols(); ++c) {
      if (std::atan2(class1(1, c), class1(0, c)) < phi) ++s;
    }
    total += 1.0 + std::pow((n - s) / (n + s), 2);
  }
  if (inner) *inner = j;
  return total;
}

}  // namespace oracle
