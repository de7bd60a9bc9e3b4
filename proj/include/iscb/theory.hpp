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

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "iscb/random.hpp"

namespace iscb::theory {

using Vec2 = Eigen::Vector2d;
using ScorePair = std::pair<Vec2, Vec2>;

/// arccos(<v1, v2> / (|v1| |v2|)) with the cosine clamped to [-1, 1].
/// Throws `undefined_angle` if either vector is zero.
double angle(const Eigen::Ref<const Eigen::VectorXd>& v1, const Eigen::Ref<const Eigen::VectorXd>& v2);

/// Two equal point masses separated by j of the level-1 hyperplanes:
/// ((j, 0), (0, j)), unnormalized.
ScorePair equal_point_mass_scores(int j);

/// Point masses with a1 and a2 points, m level-1 hyperplanes of which j
/// separate them. Unnormalized r~ for a class-1 and a class-2 test point.
ScorePair unequal_point_mass_scores(double m, double j, double a1, double a2);

/// Angle between the two point masses after one application, as a function of
/// the separating fraction j/m (continuum weights j/m and 1 - j/m) and the
/// mass ratio c = A1 / A2.
double second_iteration_separation(double separating_fraction, double mass_ratio);

/// Same, for a finite number of hyperplanes.
double second_iteration_separation(int m, int j, double mass_ratio);

/// j + sum_i ((n - s_i) / (n + s_i))^2 over the j hyperplanes between a point
/// and the symmetry axis.
double symmetric_margin(int n, std::span<const int> s);

/// Angular model: wedges G1, G2 with angles a1, a2 and separation a12; k1, k2
/// hyperplanes cut the wedges and j separate them.
struct WedgeConfig {
  int k1 = 0;
  int k2 = 0;
  int j = 0;
  double a1 = 1.0;
  double a2 = 1.0;
  double a12 = 1.0;
};

struct BoundConstants {
  double c1, c2, c3, c4;
};

BoundConstants bound_constants();

/// (g1, g2) for given draws u (k1 of them) and u' (k2 of them).
ScorePair wedge_scores(int j, std::span<const double> u, std::span<const double> u_prime);

/// Draws u, u' ~ U[0, 1] and evaluates wedge_scores. Requires a1 == a2.
ScorePair sample_wedge_scores(const WedgeConfig& cfg, Seed seed);

/// Right-hand side of the cos(theta) <= <g1, g2> / j^2 relaxation.
double cos_relaxation(const ScorePair& g, int j);

/// Closed-form expectation of cos_relaxation; requires j >= 1 and a1 == a2.
double expected_cos_bound(const WedgeConfig& cfg);

/// Markov bound on P(theta <= a), a in (0, pi/2); the raw value may exceed 1.
double angle_bound_raw(const WedgeConfig& cfg, double a);
/// Clamped at 1 for reporting.
double angle_bound(const WedgeConfig& cfg, double a);

/// E[u(1-u)/(1+u)^2], E[(1-u)/(1+u)^2], E[u^2(1-u)^2/(1+u)^4], E[(1-u)^2/(1+u)^4]
/// for u ~ U[0, 1], in closed form.
std::array<double, 4> cut_moments();

/// The four integrands above, in the same order.
double cut_integrand(int which, double u);

/// Adaptive Gauss-Kronrod quadrature of cut_integrand over [0, 1].
std::array<double, 4> cut_moments_quadrature();

struct MomentEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Monte Carlo means of the four integrands from `draws` uniform samples.
std::array<MomentEstimate, 4> cut_moments_monte_carlo(std::size_t draws, Seed seed);

struct WedgeSimulation {
  std::size_t draws = 0;
  double mean_angle = 0.0;
  double mean_relaxation = 0.0;
  double relaxation_standard_error = 0.0;
  std::vector<double> thresholds;        // the a values
  std::vector<double> probability;       // empirical P(theta <= a)
  std::vector<double> probability_error; // binomial standard error
};

/// Repeats sample_wedge_scores `draws` times (substream per draw).
WedgeSimulation simulate_wedges(const WedgeConfig& cfg, std::span<const double> thresholds,
                                std::size_t draws, Seed seed);

}  // namespace iscb::theory
