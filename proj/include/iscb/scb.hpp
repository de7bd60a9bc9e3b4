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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "iscb/quantize.hpp"
#include "iscb/random.hpp"

namespace iscb {

/// Class ids are 1-based, matching labels b_i in {1, ..., G}.
using ClassId = int;

/// Bit j is set iff the code is +1 on the j-th hyperplane of the tuple.
using Pattern = std::uint32_t;

inline constexpr int kMaxLevels = 32;

/// For every level l in 1..L, m ordered tuples of l distinct row indices.
class TuplePlan {
 public:
  TuplePlan() = default;
  /// `indices[l - 1]` holds the m tuples of level l back to back (m * l
  /// entries). Validates distinctness and range.
  TuplePlan(int measurements, std::vector<std::vector<std::uint32_t>> indices);

  int levels() const { return static_cast<int>(indices_.size()); }
  int measurements() const { return measurements_; }
  std::span<const std::uint32_t> tuple(int level, int i) const;
  const std::vector<std::vector<std::uint32_t>>& indices() const { return indices_; }

  friend bool operator==(const TuplePlan&, const TuplePlan&) = default;

 private:
  int measurements_ = 0;
  std::vector<std::vector<std::uint32_t>> indices_;
};

/// Within a tuple indices are distinct; across the m tuples of a level they
/// are drawn independently, so tuples may repeat.
TuplePlan sample_tuples(int levels, int measurements, Seed seed);

Pattern pattern_of(std::span<const SignCode> code, std::span<const std::uint32_t> tuple);

/// Membership scores of one sign pattern from its per-class counts:
///   r_g = (P_g / sum P) * (sum_j |P_g - P_j| / sum P).
/// Zero for absent classes. Throws `unobserved_pattern` if all counts are 0.
std::vector<double> membership(std::span<const std::uint32_t> counts);

struct TableEntry {
  std::uint32_t class_index = 0;  // 0-based
  std::uint32_t count = 0;
  double score = 0.0;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Sparse membership table. Each (level, measurement) slot keeps its observed
/// patterns sorted, and for every pattern only the classes that occur with it
/// (classes with zero count always score zero).
class MembershipTable {
 public:
  struct Slot {
    std::vector<Pattern> patterns;
    std::vector<std::uint32_t> offsets;  // patterns.size() + 1 entries
    std::vector<TableEntry> entries;

    std::span<const TableEntry> entries_of(std::size_t k) const {
      return {entries.data() + offsets[k], offsets[k + 1] - offsets[k]};
    }
    friend bool operator==(const Slot&, const Slot&) = default;
  };

  MembershipTable() = default;
  MembershipTable(int classes, int levels, int measurements);

  int classes() const { return classes_; }
  int levels() const { return levels_; }
  int measurements() const { return measurements_; }

  const Slot& slot(int level, int i) const { return slots_[index(level, i)]; }
  void set_slot(int level, int i, Slot slot);

  /// Empty span when the pattern was not observed in training.
  std::span<const TableEntry> find(int level, int i, Pattern t) const;
  bool contains(int level, int i, Pattern t) const;

  /// Dense G-vectors; throw `unobserved_pattern` when absent.
  std::vector<double> scores(int level, int i, Pattern t) const;
  std::vector<std::uint32_t> counts(int level, int i, Pattern t) const;

  std::size_t pattern_count() const;

  friend bool operator==(const MembershipTable&, const MembershipTable&) = default;

 private:
  std::size_t index(int level, int i) const;

  int classes_ = 0;
  int levels_ = 0;
  int measurements_ = 0;
  std::vector<Slot> slots_;
};

class ScbModel {
 public:
  ScbModel() = default;
  ScbModel(TuplePlan plan, MembershipTable table);

  int classes() const { return table_.classes(); }
  int levels() const { return plan_.levels(); }
  int measurements() const { return plan_.measurements(); }
  const TuplePlan& plan() const { return plan_; }
  const MembershipTable& table() const { return table_; }

  friend bool operator==(const ScbModel&, const ScbModel&) = default;

 private:
  TuplePlan plan_;
  MembershipTable table_;
};

ScbModel train(const SignMatrix& q, std::span<const ClassId> labels, int classes, TuplePlan plan);

/// Normalized (divided by L*m) per-class score r~.
struct ScoreVector {
  std::vector<double> values;
  bool normalized = true;
  std::size_t matched = 0;  // (level, measurement) slots whose pattern was observed
};

/// Per-level decomposition r^(l, g), stored level-major (l outer, g inner),
/// with the same L*m normalization as ScoreVector.
struct LevelScores {
  int levels = 0;
  int classes = 0;
  std::vector<double> values;
  std::size_t matched = 0;

  double operator()(int level, ClassId g) const {
    return values[static_cast<std::size_t>((level - 1) * classes + (g - 1))];
  }
  /// Sum over levels; this is exactly how `score` forms r~.
  ScoreVector marginal() const;
};

LevelScores score_levels(const ScbModel& model, std::span<const SignCode> code);
ScoreVector score(const ScbModel& model, std::span<const SignCode> code);
ClassId classify(const ScbModel& model, std::span<const SignCode> code);

/// Lowest class id wins ties.
ClassId argmax_class(std::span<const double> values);

enum class Variant { rtilde, rhat };

const char* to_string(Variant v);
Variant parse_variant(const std::string& text);

/// Scores every column of q. Rows are r~ (G of them) or r^ (L*G, level-major).
Eigen::MatrixXd score_columns(const ScbModel& model, const SignMatrix& q, Variant features);

}  // namespace iscb
