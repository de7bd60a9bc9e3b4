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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "iscb/errors.hpp"
#include "iscb/scb.hpp"
#include "oracles.hpp"

using namespace iscb;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an iscb::Error");
  return ErrorKind::io;
}

SignMatrix random_codes(int m, int p, std::mt19937& rng) {
  SignMatrix::Storage s(m, p);
  std::bernoulli_distribution coin(0.5);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < m; ++i) s(i, j) = coin(rng) ? 1 : -1;
  return SignMatrix(s);
}

std::vector<double> as_vector(const ScoreVector& s) { return s.values; }

}  // namespace

TEST_SUITE("scb") {

TEST_CASE("level-1 tuples are single hyperplanes") {
  const auto plan = sample_tuples(1, 5, 2);
  CHECK(plan.levels() == 1);
  for (int i = 0; i < 5; ++i) {
    REQUIRE(plan.tuple(1, i).size() == 1);
    CHECK(plan.tuple(1, i)[0] < 5u);
  }
}

TEST_CASE("tuples hold distinct indices") {
  const auto plan = sample_tuples(4, 200, 9);
  CHECK(plan.levels() == 4);
  for (int level = 1; level <= 4; ++level) {
    for (int i = 0; i < 200; ++i) {
      auto t = plan.tuple(level, i);
      std::set<std::uint32_t> distinct(t.begin(), t.end());
      CHECK(distinct.size() == static_cast<std::size_t>(level));
    }
  }
  CHECK(plan == sample_tuples(4, 200, 9));
  CHECK_FALSE(plan == sample_tuples(4, 200, 10));
}

TEST_CASE("a full-width tuple is a permutation of every index") {
  const auto plan = sample_tuples(3, 3, 0);
  for (int i = 0; i < 3; ++i) {
    auto t = plan.tuple(3, i);
    std::vector<std::uint32_t> sorted(t.begin(), t.end());
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<std::uint32_t>{0, 1, 2});
  }
}

TEST_CASE("impossible plans are rejected") {
  CHECK(kind_of([] { sample_tuples(6, 5, 1); }) == ErrorKind::infeasible_tuple);
  CHECK(kind_of([] { sample_tuples(33, 40, 1); }) == ErrorKind::pattern_width);
  CHECK(kind_of([] { TuplePlan(3, {{0, 1, 1}, {0, 0, 1, 2, 2, 1}}); }) == ErrorKind::infeasible_tuple);
}

TEST_CASE("membership of small count vectors") {
  const std::vector<std::uint32_t> c31{3, 1}, c22{2, 2}, c50{5, 0};
  const auto r31 = membership(c31);
  CHECK(r31[0] == 0.375);
  CHECK(r31[1] == 0.125);
  CHECK(membership(c22) == std::vector<double>{0.0, 0.0});
  CHECK(membership(c50) == std::vector<double>{1.0, 0.0});
  const std::vector<std::uint32_t> none{0, 0};
  CHECK(kind_of([&] { membership(none); }) == ErrorKind::unobserved_pattern);
}

TEST_CASE("a single class scores zero everywhere") {
  const std::vector<std::uint32_t> c{7};
  CHECK(membership(c) == std::vector<double>{0.0});
}

TEST_CASE("a lone class among three scores G - 1") {
  // (4/4) * (|4-0| + |4-0|) / 4 = 2: the spread sums over every absent class.
  const std::vector<std::uint32_t> c{4, 0, 0};
  CHECK(membership(c) == std::vector<double>{2.0, 0.0, 0.0});
}

TEST_CASE("membership fractions partition and absent classes score zero") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::uint32_t> count(0, 6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint32_t> c{count(rng), count(rng), count(rng)};
    if (c[0] + c[1] + c[2] == 0) continue;
    const auto r = membership(c);
    for (int g = 0; g < 3; ++g) {
      CHECK(r[g] >= 0.0);
      if (c[g] == 0) CHECK(r[g] == 0.0);
    }
  }
}

TEST_CASE("hand-built four-point table") {
  // Identity measurement, one level. Columns: (1,1) and (1,-1) are class 1;
  // (2,1) and (-1,-1) are class 2.
  Eigen::MatrixXd x(2, 4);
  x << 1, 2, 1, -1,
       1, 1, -1, -1;
  const std::vector<ClassId> labels{1, 2, 1, 2};
  const auto q = binarize(MeasurementMatrix(Eigen::Matrix2d::Identity()), x);
  const auto model = train(q, labels, 2, oracle::identity_plan(2));
  const auto& t = model.table();
  // Hyperplane 0: "+" holds classes (2, 1), "-" holds (0, 1).
  CHECK(t.counts(1, 0, 1) == std::vector<std::uint32_t>{2, 1});
  CHECK(t.scores(1, 0, 1)[0] == doctest::Approx(2.0 / 9).epsilon(1e-15));
  CHECK(t.scores(1, 0, 1)[1] == doctest::Approx(1.0 / 9).epsilon(1e-15));
  CHECK(t.scores(1, 0, 0) == std::vector<double>{0.0, 1.0});
  // Hyperplane 1: both sides hold one point of each class.
  CHECK(t.scores(1, 1, 1) == std::vector<double>{0.0, 0.0});
  CHECK(t.scores(1, 1, 0) == std::vector<double>{0.0, 0.0});
  CHECK(t.pattern_count() == 4);
}

TEST_CASE("tables and scores match the brute-force enumerator") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    const int levels = std::uniform_int_distribution<int>(1, std::min(2, m))(rng);
    const int classes = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto q = random_codes(m, p, rng);
    std::vector<ClassId> labels(p);
    for (auto& b : labels) b = std::uniform_int_distribution<int>(1, classes)(rng);
    const auto plan = sample_tuples(levels, m, rng());
    const auto model = train(q, labels, classes, plan);
    const auto codes = oracle::to_codes(q);
    const auto ref = oracle::brute_force_table(codes, labels, classes, plan);

    std::size_t seen = 0;
    for (int level = 1; level <= levels; ++level) {
      for (int i = 0; i < m; ++i) {
        const auto& slot = model.table().slot(level, i);
        for (std::size_t k = 0; k < slot.patterns.size(); ++k, ++seen) {
          const oracle::Key key{level, i, oracle::pattern_string(slot.patterns[k], level)};
          REQUIRE(ref.scores.count(key) == 1);
          const auto mine = model.table().scores(level, i, slot.patterns[k]);
          const auto counts = model.table().counts(level, i, slot.patterns[k]);
          for (int g = 0; g < classes; ++g) {
            CHECK(std::abs(mine[g] - ref.scores.at(key)[g]) <= 1e-12);
            CHECK(static_cast<int>(counts[g]) == ref.counts.at(key)[g]);
          }
        }
      }
    }
    CHECK(seen == ref.scores.size());

    const auto fresh = random_codes(m, 4, rng);
    for (const auto* src : {&q, &fresh}) {
      const auto src_codes = oracle::to_codes(*src);
      for (Index j = 0; j < src->cols(); ++j) {
        const auto mine = as_vector(score(model, src->column(j)));
        const auto expect = oracle::brute_force_score(ref, src_codes[j], classes, plan);
        for (int g = 0; g < classes; ++g) CHECK(std::abs(mine[g] - expect[g]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("unseen patterns contribute nothing") {
  SignMatrix::Storage s = SignMatrix::Storage::Ones(3, 2);
  const auto model = train(SignMatrix(s), std::vector<ClassId>{1, 2}, 2, sample_tuples(2, 3, 1));
  const std::vector<SignCode> opposite(3, -1);
  const auto r = score(model, opposite);
  CHECK(r.values == std::vector<double>{0.0, 0.0});
  CHECK(r.matched == 0);
  CHECK(classify(model, opposite) == 1);
}

TEST_CASE("argmax breaks ties toward the lowest class") {
  CHECK(argmax_class(std::vector<double>{0.3, 0.1}) == 1);
  CHECK(argmax_class(std::vector<double>{0.2, 0.2}) == 1);
  CHECK(argmax_class(std::vector<double>{0.1, 0.4, 0.4}) == 2);
}

TEST_CASE("training input is validated") {
  const auto plan = sample_tuples(1, 2, 1);
  SignMatrix::Storage none(2, 0);
  CHECK(kind_of([&] { train(SignMatrix(none), std::vector<ClassId>{}, 2, plan); }) == ErrorKind::empty_data);
  SignMatrix::Storage two = SignMatrix::Storage::Ones(2, 2);
  CHECK(kind_of([&] { train(SignMatrix(two), std::vector<ClassId>{1, 3}, 2, plan); }) == ErrorKind::label);
  CHECK(kind_of([&] { train(SignMatrix(two), std::vector<ClassId>{1}, 2, plan); }) ==
        ErrorKind::invalid_dimension);
  const auto model = train(SignMatrix(two), std::vector<ClassId>{1, 2}, 2, plan);
  const std::vector<SignCode> short_code{1};
  CHECK(kind_of([&] { score(model, short_code); }) == ErrorKind::invalid_dimension);
}

TEST_CASE("every training column only meets stored patterns") {
  std::mt19937 rng(8);
  const auto q = random_codes(12, 40, rng);
  std::vector<ClassId> labels(40);
  for (auto& b : labels) b = std::uniform_int_distribution<int>(1, 4)(rng);
  const auto model = train(q, labels, 4, sample_tuples(5, 12, 3));
  for (Index j = 0; j < q.cols(); ++j) CHECK(score(model, q.column(j)).matched == 5u * 12u);
}

TEST_CASE("equal point masses score exactly j/m") {
  const double phi1 = std::numbers::pi / 8, phi2 = 3 * std::numbers::pi / 8;
  Eigen::MatrixXd x(2, 6);
  for (int k = 0; k < 6; ++k) {
    const double phi = k < 3 ? phi1 : phi2;
    x.col(k) << std::cos(phi), std::sin(phi);
  }
  const std::vector<ClassId> labels{1, 1, 1, 2, 2, 2};
  const int m = 9;
  for (int j = 0; j <= m; ++j) {
    const MeasurementMatrix a(oracle::point_mass_normals(phi1, phi2, m, j));
    const auto q = binarize(a, x);
    const auto model = train(q, labels, 2, oracle::identity_plan(m));
    const auto r1 = score(model, q.column(0)).values;
    const auto r2 = score(model, q.column(5)).values;
    CHECK(r1 == std::vector<double>{double(j) / m, 0.0});
    CHECK(r2 == std::vector<double>{0.0, double(j) / m});
  }
}

TEST_CASE("a two-to-one imbalance scores (16/3, 2/3) over m") {
  const double phi1 = 0.3, phi2 = 1.1;
  const int c = 5, m = 10, j = 4;
  Eigen::MatrixXd x(2, 3 * c);
  std::vector<ClassId> labels;
  for (int k = 0; k < 3 * c; ++k) {
    const double phi = k < 2 * c ? phi1 : phi2;
    x.col(k) << std::cos(phi), std::sin(phi);
    labels.push_back(k < 2 * c ? 1 : 2);
  }
  const auto q = binarize(MeasurementMatrix(oracle::point_mass_normals(phi1, phi2, m, j)), x);
  const auto model = train(q, labels, 2, oracle::identity_plan(m));
  const auto r1 = score(model, q.column(0)).values;
  const auto r2 = score(model, q.column(3 * c - 1)).values;
  CHECK(std::abs(r1[0] - 16.0 / 3 / m) <= 1e-12);
  CHECK(std::abs(r1[1] - 2.0 / 3 / m) <= 1e-12);
  CHECK(std::abs(r2[0] - 4.0 / 3 / m) <= 1e-12);
  CHECK(std::abs(r2[1] - 14.0 / 3 / m) <= 1e-12);
}

TEST_CASE("per-level scores add up to the class scores") {
  std::mt19937 rng(77);
  const auto q = random_codes(10, 30, rng);
  std::vector<ClassId> labels(30);
  for (auto& b : labels) b = std::uniform_int_distribution<int>(1, 3)(rng);
  const auto plan = sample_tuples(4, 10, 5);
  const auto model = train(q, labels, 3, plan);
  const auto ref = oracle::brute_force_table(oracle::to_codes(q), labels, 3, plan);
  const auto probe = random_codes(10, 5, rng);
  const auto probe_codes = oracle::to_codes(probe);
  for (Index j = 0; j < probe.cols(); ++j) {
    const auto levels = score_levels(model, probe.column(j));
    const auto expect = oracle::brute_force_score(ref, probe_codes[j], 3, plan);
    for (int g = 1; g <= 3; ++g) {
      double sum = 0;
      for (int level = 1; level <= 4; ++level) sum += levels(level, g);
      CHECK(std::abs(sum - expect[g - 1]) <= 1e-12);
    }
  }
  const auto features = score_columns(model, probe, Variant::rhat);
  CHECK(features.rows() == 12);
  CHECK(score_columns(model, probe, Variant::rtilde).rows() == 3);
}

TEST_CASE("variant names parse") {
  CHECK(parse_variant("rhat") == Variant::rhat);
  CHECK(std::string(to_string(Variant::rtilde)) == "rtilde");
  CHECK_THROWS_AS(parse_variant("r"), Error);
}

}  // TEST_SUITE
