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

#include "iscb/scb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <boost/random/uniform_int_distribution.hpp>

#include "iscb/errors.hpp"
#include "parallel.hpp"

namespace iscb {

TuplePlan::TuplePlan(int measurements, std::vector<std::vector<std::uint32_t>> indices)
    : measurements_(measurements), indices_(std::move(indices)) {
  if (measurements_ < 1) throw Error(ErrorKind::invalid_dimension, "plan needs m >= 1");
  if (indices_.empty()) throw Error(ErrorKind::infeasible_tuple, "plan needs at least one level");
  if (levels() > kMaxLevels) {
    throw Error(ErrorKind::pattern_width, "at most " + std::to_string(kMaxLevels) + " levels");
  }
  if (levels() > measurements_) {
    throw Error(ErrorKind::infeasible_tuple, "level exceeds the number of hyperplanes");
  }
  for (int level = 1; level <= levels(); ++level) {
    const auto& flat = indices_[static_cast<std::size_t>(level - 1)];
    if (flat.size() != static_cast<std::size_t>(measurements_) * static_cast<std::size_t>(level)) {
      throw Error(ErrorKind::invalid_dimension,
                  "level " + std::to_string(level) + " must hold m tuples of that length");
    }
    for (int i = 0; i < measurements_; ++i) {
      auto t = tuple(level, i);
      for (std::size_t a = 0; a < t.size(); ++a) {
        if (t[a] >= static_cast<std::uint32_t>(measurements_)) {
          throw Error(ErrorKind::invalid_dimension, "tuple index out of range");
        }
        for (std::size_t b = 0; b < a; ++b) {
          if (t[a] == t[b]) throw Error(ErrorKind::infeasible_tuple, "repeated index in a tuple");
        }
      }
    }
  }
}

std::span<const std::uint32_t> TuplePlan::tuple(int level, int i) const {
  const auto& flat = indices_[static_cast<std::size_t>(level - 1)];
  return {flat.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(level),
          static_cast<std::size_t>(level)};
}

TuplePlan sample_tuples(int levels, int measurements, Seed seed) {
  if (levels < 1) throw Error(ErrorKind::infeasible_tuple, "need at least one level");
  if (levels > kMaxLevels) {
    throw Error(ErrorKind::pattern_width, "at most " + std::to_string(kMaxLevels) + " levels");
  }
  if (measurements < 1) throw Error(ErrorKind::invalid_dimension, "need m >= 1");
  if (levels > measurements) {
    throw Error(ErrorKind::infeasible_tuple, "cannot pick " + std::to_string(levels) +
                                                 " distinct hyperplanes out of " +
                                                 std::to_string(measurements));
  }
  std::vector<std::vector<std::uint32_t>> indices(static_cast<std::size_t>(levels));
  boost::random::uniform_int_distribution<std::uint32_t> pick(
      0, static_cast<std::uint32_t>(measurements - 1));
  for (int level = 1; level <= levels; ++level) {
    Engine rng = make_engine(seed, stream::tuple_plan, static_cast<std::uint64_t>(level));
    auto& flat = indices[static_cast<std::size_t>(level - 1)];
    flat.reserve(static_cast<std::size_t>(measurements) * static_cast<std::size_t>(level));
    for (int i = 0; i < measurements; ++i) {
      const std::size_t begin = flat.size();
      while (flat.size() - begin < static_cast<std::size_t>(level)) {
        const std::uint32_t r = pick(rng);
        if (std::find(flat.begin() + static_cast<std::ptrdiff_t>(begin), flat.end(), r) == flat.end()) {
          flat.push_back(r);
        }
      }
    }
  }
  return TuplePlan(measurements, std::move(indices));
}

Pattern pattern_of(std::span<const SignCode> code, std::span<const std::uint32_t> tuple) {
  Pattern t = 0;
  for (std::size_t b = 0; b < tuple.size(); ++b) {
    if (code[tuple[b]] > 0) t |= Pattern{1} << b;
  }
  return t;
}

std::vector<double> membership(std::span<const std::uint32_t> counts) {
  double total = 0.0;
  for (auto c : counts) total += c;
  if (total == 0.0) throw Error(ErrorKind::unobserved_pattern, "pattern has no training points");
  std::vector<double> r(counts.size(), 0.0);
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (counts[g] == 0) continue;
    double spread = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      spread += std::abs(static_cast<double>(counts[g]) - static_cast<double>(counts[j]));
    }
    r[g] = (counts[g] / total) * (spread / total);
  }
  return r;
}

MembershipTable::MembershipTable(int classes, int levels, int measurements)
    : classes_(classes), levels_(levels), measurements_(measurements) {
  if (classes < 1 || levels < 1 || measurements < 1) {
    throw Error(ErrorKind::invalid_dimension, "table dimensions must be positive");
  }
  slots_.resize(static_cast<std::size_t>(levels) * static_cast<std::size_t>(measurements));
  for (auto& s : slots_) s.offsets.assign(1, 0);
}

std::size_t MembershipTable::index(int level, int i) const {
  if (level < 1 || level > levels_ || i < 0 || i >= measurements_) {
    throw Error(ErrorKind::invalid_dimension, "slot (" + std::to_string(level) + ", " +
                                                  std::to_string(i) + ") out of range");
  }
  return static_cast<std::size_t>(level - 1) * static_cast<std::size_t>(measurements_) +
         static_cast<std::size_t>(i);
}

void MembershipTable::set_slot(int level, int i, Slot slot) {
  if (slot.offsets.size() != slot.patterns.size() + 1 || slot.offsets.front() != 0 ||
      slot.offsets.back() != slot.entries.size()) {
    throw Error(ErrorKind::consistency, "slot offsets do not match its entries");
  }
  if (!std::is_sorted(slot.patterns.begin(), slot.patterns.end()) ||
      std::adjacent_find(slot.patterns.begin(), slot.patterns.end()) != slot.patterns.end()) {
    throw Error(ErrorKind::consistency, "slot patterns must be strictly increasing");
  }
  if (level < kMaxLevels) {
    for (auto t : slot.patterns) {
      if (t >> level) throw Error(ErrorKind::pattern_width, "pattern wider than its level");
    }
  }
  for (std::size_t k = 0; k + 1 < slot.offsets.size(); ++k) {
    if (slot.offsets[k] >= slot.offsets[k + 1]) {
      throw Error(ErrorKind::consistency, "observed pattern without entries");
    }
  }
  for (const auto& e : slot.entries) {
    if (e.class_index >= static_cast<std::uint32_t>(classes_) || e.count == 0) {
      throw Error(ErrorKind::consistency, "bad table entry");
    }
  }
  slots_[index(level, i)] = std::move(slot);
}

std::span<const TableEntry> MembershipTable::find(int level, int i, Pattern t) const {
  const Slot& s = slots_[index(level, i)];
  auto it = std::lower_bound(s.patterns.begin(), s.patterns.end(), t);
  if (it == s.patterns.end() || *it != t) return {};
  return s.entries_of(static_cast<std::size_t>(it - s.patterns.begin()));
}

bool MembershipTable::contains(int level, int i, Pattern t) const {
  return !find(level, i, t).empty();
}

std::vector<double> MembershipTable::scores(int level, int i, Pattern t) const {
  auto entries = find(level, i, t);
  if (entries.empty()) throw Error(ErrorKind::unobserved_pattern, "pattern not in table");
  std::vector<double> r(static_cast<std::size_t>(classes_), 0.0);
  for (const auto& e : entries) r[e.class_index] = e.score;
  return r;
}

std::vector<std::uint32_t> MembershipTable::counts(int level, int i, Pattern t) const {
  auto entries = find(level, i, t);
  if (entries.empty()) throw Error(ErrorKind::unobserved_pattern, "pattern not in table");
  std::vector<std::uint32_t> c(static_cast<std::size_t>(classes_), 0);
  for (const auto& e : entries) c[e.class_index] = e.count;
  return c;
}

std::size_t MembershipTable::pattern_count() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s.patterns.size();
  return n;
}

ScbModel::ScbModel(TuplePlan plan, MembershipTable table)
    : plan_(std::move(plan)), table_(std::move(table)) {
  if (table_.levels() != plan_.levels() || table_.measurements() != plan_.measurements()) {
    throw Error(ErrorKind::consistency, "table shape does not match the tuple plan");
  }
}

namespace {

// Counts per class for every observed pattern of one slot, via a sort of
// (pattern, class) keys.
MembershipTable::Slot build_slot(const SignMatrix& q, std::span<const ClassId> labels,
                                 std::span<const std::uint32_t> tuple, int classes,
                                 std::vector<std::uint64_t>& keys) {
  const Index p = q.cols();
  keys.resize(static_cast<std::size_t>(p));
  for (Index j = 0; j < p; ++j) {
    const Pattern t = pattern_of(q.column(j), tuple);
    keys[static_cast<std::size_t>(j)] =
        (std::uint64_t{t} << 32) | static_cast<std::uint32_t>(labels[static_cast<std::size_t>(j)] - 1);
  }
  std::sort(keys.begin(), keys.end());

  MembershipTable::Slot slot;
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(classes), 0);
  std::size_t k = 0;
  while (k < keys.size()) {
    const auto t = static_cast<Pattern>(keys[k] >> 32);
    std::fill(counts.begin(), counts.end(), 0);
    for (; k < keys.size() && static_cast<Pattern>(keys[k] >> 32) == t; ++k) {
      ++counts[keys[k] & 0xffffffffULL];
    }
    const std::vector<double> r = membership(counts);
    slot.patterns.push_back(t);
    for (std::size_t g = 0; g < counts.size(); ++g) {
      if (counts[g] == 0) continue;
      slot.entries.push_back({static_cast<std::uint32_t>(g), counts[g], r[g]});
    }
    slot.offsets.push_back(static_cast<std::uint32_t>(slot.entries.size()));
  }
  slot.offsets.insert(slot.offsets.begin(), 0);
  return slot;
}

}  // namespace

ScbModel train(const SignMatrix& q, std::span<const ClassId> labels, int classes, TuplePlan plan) {
  if (q.cols() == 0) throw Error(ErrorKind::empty_data, "no training points");
  if (classes < 1) throw Error(ErrorKind::configuration, "need at least one class");
  if (labels.size() != static_cast<std::size_t>(q.cols())) {
    throw Error(ErrorKind::invalid_dimension, "one label per training column required");
  }
  for (ClassId b : labels) {
    if (b < 1 || b > classes) {
      throw Error(ErrorKind::label, "label " + std::to_string(b) + " outside 1.." +
                                        std::to_string(classes));
    }
  }
  if (plan.measurements() != q.rows()) {
    throw Error(ErrorKind::invalid_dimension, "plan expects codes of length " +
                                                  std::to_string(plan.measurements()) + ", got " +
                                                  std::to_string(q.rows()));
  }

  MembershipTable table(classes, plan.levels(), plan.measurements());
  const int m = plan.measurements();
  const std::size_t slots = static_cast<std::size_t>(plan.levels()) * static_cast<std::size_t>(m);
  std::vector<MembershipTable::Slot> built(slots);
  detail::parallel_for(slots, [&](std::size_t s) {
    thread_local std::vector<std::uint64_t> keys;
    const int level = static_cast<int>(s / static_cast<std::size_t>(m)) + 1;
    const int i = static_cast<int>(s % static_cast<std::size_t>(m));
    built[s] = build_slot(q, labels, plan.tuple(level, i), classes, keys);
  });
  for (std::size_t s = 0; s < slots; ++s) {
    const int level = static_cast<int>(s / static_cast<std::size_t>(m)) + 1;
    const int i = static_cast<int>(s % static_cast<std::size_t>(m));
    table.set_slot(level, i, std::move(built[s]));
  }
  return ScbModel(std::move(plan), std::move(table));
}

ScoreVector LevelScores::marginal() const {
  ScoreVector out;
  out.values.assign(static_cast<std::size_t>(classes), 0.0);
  for (int level = 0; level < levels; ++level) {
    for (int g = 0; g < classes; ++g) {
      out.values[static_cast<std::size_t>(g)] += values[static_cast<std::size_t>(level * classes + g)];
    }
  }
  out.matched = matched;
  return out;
}

LevelScores score_levels(const ScbModel& model, std::span<const SignCode> code) {
  if (code.size() != static_cast<std::size_t>(model.measurements())) {
    throw Error(ErrorKind::invalid_dimension, "code length " + std::to_string(code.size()) +
                                                  " does not match m = " +
                                                  std::to_string(model.measurements()));
  }
  const int levels = model.levels();
  const int m = model.measurements();
  const int classes = model.classes();
  LevelScores out;
  out.levels = levels;
  out.classes = classes;
  out.values.assign(static_cast<std::size_t>(levels * classes), 0.0);
  for (int level = 1; level <= levels; ++level) {
    double* row = out.values.data() + static_cast<std::size_t>((level - 1) * classes);
    for (int i = 0; i < m; ++i) {
      auto entries = model.table().find(level, i, pattern_of(code, model.plan().tuple(level, i)));
      if (entries.empty()) continue;
      ++out.matched;
      for (const auto& e : entries) row[e.class_index] += e.score;
    }
  }
  const double norm = static_cast<double>(levels) * static_cast<double>(m);
  for (auto& v : out.values) v /= norm;
  return out;
}

ScoreVector score(const ScbModel& model, std::span<const SignCode> code) {
  return score_levels(model, code).marginal();
}

ClassId classify(const ScbModel& model, std::span<const SignCode> code) {
  return argmax_class(score(model, code).values);
}

ClassId argmax_class(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::invalid_dimension, "empty score vector");
  std::size_t best = 0;
  for (std::size_t g = 1; g < values.size(); ++g) {
    if (values[g] > values[best]) best = g;
  }
  return static_cast<ClassId>(best) + 1;
}

const char* to_string(Variant v) { return v == Variant::rtilde ? "rtilde" : "rhat"; }

Variant parse_variant(const std::string& text) {
  if (text == "rtilde") return Variant::rtilde;
  if (text == "rhat") return Variant::rhat;
  throw Error(ErrorKind::configuration, "unknown variant '" + text + "' (expected rtilde or rhat)");
}

Eigen::MatrixXd score_columns(const ScbModel& model, const SignMatrix& q, Variant features) {
  const Index width = features == Variant::rtilde
                          ? model.classes()
                          : static_cast<Index>(model.levels()) * model.classes();
  Eigen::MatrixXd out(width, q.cols());
  detail::parallel_for(static_cast<std::size_t>(q.cols()), [&](std::size_t j) {
    const LevelScores s = score_levels(model, q.column(static_cast<Index>(j)));
    if (features == Variant::rhat) {
      for (Index r = 0; r < width; ++r) out(r, static_cast<Index>(j)) = s.values[static_cast<std::size_t>(r)];
    } else {
      const ScoreVector v = s.marginal();
      for (Index r = 0; r < width; ++r) out(r, static_cast<Index>(j)) = v.values[static_cast<std::size_t>(r)];
    }
  });
  return out;
}

}  // namespace iscb
