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

#include "iscb/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "iscb/errors.hpp"

namespace iscb::theory {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_equal_wedges(const WedgeConfig& cfg) {
  if (cfg.k1 < 0 || cfg.k2 < 0 || cfg.j < 0) {
    throw Error(ErrorKind::configuration, "hyperplane counts must be non-negative");
  }
  if (cfg.a1 != cfg.a2) {
    throw Error(ErrorKind::configuration, "the wedge model assumes equal wedge angles");
  }
}

// Terms a hyperplane contributes when it cuts a wedge at relative position u.
double cut_own(double u) { return u * (1.0 - u) / ((1.0 + u) * (1.0 + u)); }
double cut_other(double u) { return (1.0 - u) / ((1.0 + u) * (1.0 + u)); }

}  // namespace

double angle(const Eigen::Ref<const Eigen::VectorXd>& v1, const Eigen::Ref<const Eigen::VectorXd>& v2) {
  if (v1.size() != v2.size()) throw Error(ErrorKind::invalid_dimension, "vectors differ in length");
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0 || n2 == 0.0) throw Error(ErrorKind::undefined_angle, "angle with a zero vector");
  return std::acos(std::clamp(v1.dot(v2) / (n1 * n2), -1.0, 1.0));
}

ScorePair equal_point_mass_scores(int j) {
  if (j < 0) throw Error(ErrorKind::configuration, "j must be non-negative");
  return {Vec2(j, 0.0), Vec2(0.0, j)};
}

ScorePair unequal_point_mass_scores(double m, double j, double a1, double a2) {
  if (j < 0 || j > m) throw Error(ErrorKind::configuration, "need 0 <= j <= m");
  if (a1 <= 0 || a2 <= 0) throw Error(ErrorKind::configuration, "masses must be positive");
  // A hyperplane that does not separate the masses sees both classes in the
  // same pattern; one that does sees a single class and scores 1 for it.
  const double shared = (m - j) * std::abs(a1 - a2) / ((a1 + a2) * (a1 + a2));
  return {Vec2(j + shared * a1, shared * a2), Vec2(shared * a1, j + shared * a2)};
}

double second_iteration_separation(double separating_fraction, double mass_ratio) {
  if (separating_fraction < 0.0 || separating_fraction > 1.0) {
    throw Error(ErrorKind::configuration, "separating fraction must lie in [0, 1]");
  }
  const auto [g1, g2] = unequal_point_mass_scores(1.0, separating_fraction, mass_ratio, 1.0);
  return angle(g1, g2);
}

double second_iteration_separation(int m, int j, double mass_ratio) {
  const auto [g1, g2] = unequal_point_mass_scores(m, j, mass_ratio, 1.0);
  return angle(g1, g2);
}

double symmetric_margin(int n, std::span<const int> s) {
  if (n < 1) throw Error(ErrorKind::configuration, "need at least one point per class");
  double margin = static_cast<double>(s.size());
  for (int si : s) {
    if (si < 0 || si > n) throw Error(ErrorKind::configuration, "each s_i must lie in [0, n]");
    const double q = static_cast<double>(n - si) / static_cast<double>(n + si);
    margin += q * q;
  }
  return margin;
}

BoundConstants bound_constants() {
  return {2.0 * kLn2 - 1.0, 10.0 * kLn2 * kLn2 - 14.0 * kLn2 + 5.0,
          4.0 * (1.0 - kLn2) * (3.0 * kLn2 - 2.0), -10.0 * kLn2 * kLn2 + 8.0 * kLn2 - 2.0 / 3.0};
}

ScorePair wedge_scores(int j, std::span<const double> u, std::span<const double> u_prime) {
  double k11 = 0, k12 = 0, k21 = 0, k22 = 0;
  for (double x : u) {
    k11 += cut_own(x);
    k12 += cut_other(x);
  }
  for (double x : u_prime) {
    k21 += cut_other(x);
    k22 += cut_own(x);
  }
  return {Vec2(j + k11 + k21, k12 + k22), Vec2(k11 + k21, j + k12 + k22)};
}

ScorePair sample_wedge_scores(const WedgeConfig& cfg, Seed seed) {
  require_equal_wedges(cfg);
  Engine rng = make_engine(seed, stream::wedge, 0);
  boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> u(static_cast<std::size_t>(cfg.k1));
  std::vector<double> v(static_cast<std::size_t>(cfg.k2));
  for (auto& x : u) x = unit(rng);
  for (auto& x : v) x = unit(rng);
  return wedge_scores(cfg.j, u, v);
}

double cos_relaxation(const ScorePair& g, int j) {
  if (j < 1) throw Error(ErrorKind::configuration, "relaxation needs j >= 1");
  return g.first.dot(g.second) / (static_cast<double>(j) * j);
}

double expected_cos_bound(const WedgeConfig& cfg) {
  require_equal_wedges(cfg);
  if (cfg.j < 1) throw Error(ErrorKind::configuration, "bound needs j >= 1");
  const auto c = bound_constants();
  const double k1 = cfg.k1, k2 = cfg.k2, j = cfg.j;
  return c.c1 * (k1 + k2) / j +
         (c.c2 * (k1 * k1 + k2 * k2) + c.c3 * k1 * k2 + c.c4 * (k1 + k2)) / (j * j);
}

double angle_bound_raw(const WedgeConfig& cfg, double a) {
  if (!(a > 0.0 && a < std::numbers::pi / 2)) {
    throw Error(ErrorKind::configuration, "threshold angle must lie in (0, pi/2)");
  }
  return expected_cos_bound(cfg) / std::cos(a);
}

double angle_bound(const WedgeConfig& cfg, double a) {
  return std::min(1.0, angle_bound_raw(cfg, a));
}

std::array<double, 4> cut_moments() {
  return {3.0 * kLn2 - 2.0, 1.0 - kLn2, 25.0 / 6.0 - 6.0 * kLn2, 1.0 / 6.0};
}

double cut_integrand(int which, double u) {
  switch (which) {
    case 0: return cut_own(u);
    case 1: return cut_other(u);
    case 2: return cut_own(u) * cut_own(u);
    case 3: return cut_other(u) * cut_other(u);
    default: throw Error(ErrorKind::configuration, "integrand index " + std::to_string(which));
  }
}

std::array<double, 4> cut_moments_quadrature() {
  std::array<double, 4> out{};
  for (int w = 0; w < 4; ++w) {
    out[static_cast<std::size_t>(w)] = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [w](double u) { return cut_integrand(w, u); }, 0.0, 1.0, 15, 1e-14);
  }
  return out;
}

std::array<MomentEstimate, 4> cut_moments_monte_carlo(std::size_t draws, Seed seed) {
  if (draws < 2) throw Error(ErrorKind::configuration, "need at least two draws");
  Engine rng = make_engine(seed, stream::moments, 0);
  boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, 4> sum{}, sum_sq{};
  for (std::size_t d = 0; d < draws; ++d) {
    const double u = unit(rng);
    for (int w = 0; w < 4; ++w) {
      const double f = cut_integrand(w, u);
      sum[static_cast<std::size_t>(w)] += f;
      sum_sq[static_cast<std::size_t>(w)] += f * f;
    }
  }
  std::array<MomentEstimate, 4> out{};
  const double n = static_cast<double>(draws);
  for (std::size_t w = 0; w < 4; ++w) {
    const double mean = sum[w] / n;
    const double var = std::max(0.0, (sum_sq[w] - n * mean * mean) / (n - 1.0));
    out[w] = {mean, std::sqrt(var / n)};
  }
  return out;
}

WedgeSimulation simulate_wedges(const WedgeConfig& cfg, std::span<const double> thresholds,
                                std::size_t draws, Seed seed) {
  require_equal_wedges(cfg);
  if (draws < 2) throw Error(ErrorKind::configuration, "need at least two draws");
  WedgeSimulation sim;
  sim.draws = draws;
  sim.thresholds.assign(thresholds.begin(), thresholds.end());
  std::vector<std::size_t> hits(thresholds.size(), 0);
  double angle_sum = 0.0, relax_sum = 0.0, relax_sq = 0.0;
  for (std::size_t d = 0; d < draws; ++d) {
    const ScorePair g = sample_wedge_scores(cfg, derive_seed(seed, stream::wedge, d));
    const double theta = angle(g.first, g.second);
    angle_sum += theta;
    if (cfg.j >= 1) {
      const double r = cos_relaxation(g, cfg.j);
      relax_sum += r;
      relax_sq += r * r;
    }
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (theta <= thresholds[t]) ++hits[t];
    }
  }
  const double n = static_cast<double>(draws);
  sim.mean_angle = angle_sum / n;
  sim.mean_relaxation = relax_sum / n;
  sim.relaxation_standard_error =
      std::sqrt(std::max(0.0, (relax_sq - n * sim.mean_relaxation * sim.mean_relaxation) / (n - 1.0)) / n);
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const double p = static_cast<double>(hits[t]) / n;
    sim.probability.push_back(p);
    sim.probability_error.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return sim;
}

}  // namespace iscb::theory
