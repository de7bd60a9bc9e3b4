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
#include <vector>

#include <Eigen/Core>

#include "iscb/random.hpp"

namespace iscb {

using Index = Eigen::Index;

enum class MatrixKind { unconstrained, mixed_sign };

/// True iff the row has at least one strictly positive and one strictly
/// negative entry.
bool is_mixed_sign(const Eigen::Ref<const Eigen::RowVectorXd>& row);

/// m x n matrix whose rows are hyperplane normals. Hyperplanes pass through
/// the origin unless per-row thresholds are attached, in which case row i
/// measures sign(<a_i, x> - threshold_i).
class MeasurementMatrix {
 public:
  MeasurementMatrix() = default;
  explicit MeasurementMatrix(Eigen::MatrixXd normals,
                             MatrixKind kind = MatrixKind::unconstrained);

  Index rows() const { return normals_.rows(); }
  Index cols() const { return normals_.cols(); }
  MatrixKind kind() const { return kind_; }
  const Eigen::MatrixXd& normals() const { return normals_; }

  bool affine() const { return thresholds_.size() != 0; }
  const Eigen::VectorXd& thresholds() const { return thresholds_; }
  void set_thresholds(Eigen::VectorXd thresholds);

  friend bool operator==(const MeasurementMatrix&, const MeasurementMatrix&);

 private:
  Eigen::MatrixXd normals_;
  MatrixKind kind_ = MatrixKind::unconstrained;
  Eigen::VectorXd thresholds_;
};

using SignCode = std::int8_t;

/// m x p matrix over {-1, +1}; column j is the code of data point j.
class SignMatrix {
 public:
  using Storage = Eigen::Matrix<SignCode, Eigen::Dynamic, Eigen::Dynamic>;

  SignMatrix() = default;
  /// Throws if any entry is not exactly -1 or +1.
  explicit SignMatrix(Storage codes);

  Index rows() const { return codes_.rows(); }
  Index cols() const { return codes_.cols(); }
  SignCode operator()(Index i, Index j) const { return codes_(i, j); }
  std::span<const SignCode> column(Index j) const {
    return {codes_.data() + j * codes_.rows(), static_cast<std::size_t>(codes_.rows())};
  }
  const Storage& codes() const { return codes_; }

  friend bool operator==(const SignMatrix& a, const SignMatrix& b) { return a.codes_ == b.codes_; }

 private:
  Storage codes_;
};

/// i.i.d. standard normal entries; row i is drawn from its own substream of
/// `seed`, so the result does not depend on generation order.
MeasurementMatrix gaussian_matrix(Index m, Index n, Seed seed);

struct MixedSignSample {
  MeasurementMatrix matrix;
  std::size_t draws = 0;  // raw Gaussian rows drawn, accepted or not
};

/// Gaussian rows conditioned on the mixed-sign predicate (rejection sampling).
MixedSignSample sample_mixed_sign(Index m, Index g, Seed seed);
MeasurementMatrix mixed_sign_matrix(Index m, Index g, Seed seed);

/// Attaches thresholds so that row i passes through a point drawn uniformly
/// from the box [lo, hi]. Only meant for low-dimensional demo data.
MeasurementMatrix with_affine_offsets(MeasurementMatrix a, const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi, Seed seed);

/// Entry (i, j) is +1 when <a_i, x_j> >= 0 (minus the threshold if any), else -1.
SignMatrix binarize(const MeasurementMatrix& a, const Eigen::MatrixXd& x);
std::vector<SignCode> binarize_column(const MeasurementMatrix& a, const Eigen::VectorXd& x);

}  // namespace iscb
