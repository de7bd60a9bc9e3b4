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

#include "iscb/quantize.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "iscb/errors.hpp"

namespace iscb {
namespace {

// Row substreams of a matrix seed.
constexpr std::uint64_t kRowStream = 0x726f7773;

void require_positive(Index m, Index n) {
  if (m < 1 || n < 1) {
    throw Error(ErrorKind::invalid_dimension, "matrix dimensions must be positive");
  }
}

}  // namespace

bool is_mixed_sign(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  bool pos = false;
  bool neg = false;
  for (Index k = 0; k < row.size(); ++k) {
    pos = pos || row[k] > 0.0;
    neg = neg || row[k] < 0.0;
  }
  return pos && neg;
}

MeasurementMatrix::MeasurementMatrix(Eigen::MatrixXd normals, MatrixKind kind)
    : normals_(std::move(normals)), kind_(kind) {
  if (kind_ == MatrixKind::mixed_sign) {
    for (Index i = 0; i < normals_.rows(); ++i) {
      if (!is_mixed_sign(normals_.row(i))) {
        throw Error(ErrorKind::invalid_dimension,
                    "row " + std::to_string(i) + " of a mixed-sign matrix lacks mixed signs");
      }
    }
  }
}

void MeasurementMatrix::set_thresholds(Eigen::VectorXd thresholds) {
  if (thresholds.size() != 0 && thresholds.size() != rows()) {
    throw Error(ErrorKind::invalid_dimension, "one threshold per row required");
  }
  thresholds_ = std::move(thresholds);
}

bool operator==(const MeasurementMatrix& a, const MeasurementMatrix& b) {
  return a.kind_ == b.kind_ && a.normals_.rows() == b.normals_.rows() &&
         a.normals_.cols() == b.normals_.cols() && a.normals_ == b.normals_ &&
         a.thresholds_.size() == b.thresholds_.size() && a.thresholds_ == b.thresholds_;
}

SignMatrix::SignMatrix(Storage codes) : codes_(std::move(codes)) {
  for (Index k = 0; k < codes_.size(); ++k) {
    const SignCode c = codes_.data()[k];
    if (c != 1 && c != -1) {
      throw Error(ErrorKind::invalid_dimension, "sign matrix entries must be -1 or +1");
    }
  }
}

MeasurementMatrix gaussian_matrix(Index m, Index n, Seed seed) {
  require_positive(m, n);
  Eigen::MatrixXd a(m, n);
  boost::random::normal_distribution<double> normal;
  for (Index i = 0; i < m; ++i) {
    Engine rng = make_engine(seed, kRowStream, static_cast<std::uint64_t>(i));
    for (Index k = 0; k < n; ++k) a(i, k) = normal(rng);
  }
  return MeasurementMatrix(std::move(a));
}

MixedSignSample sample_mixed_sign(Index m, Index g, Seed seed) {
  require_positive(m, g);
  if (g < 2) {
    throw Error(ErrorKind::invalid_dimension, "mixed-sign rows need at least 2 columns");
  }
  Eigen::MatrixXd a(m, g);
  std::size_t draws = 0;
  boost::random::normal_distribution<double> normal;
  for (Index i = 0; i < m; ++i) {
    Engine rng = make_engine(seed, kRowStream, static_cast<std::uint64_t>(i));
    do {
      for (Index k = 0; k < g; ++k) a(i, k) = normal(rng);
      ++draws;
    } while (!is_mixed_sign(a.row(i)));
  }
  return {MeasurementMatrix(std::move(a), MatrixKind::mixed_sign), draws};
}

MeasurementMatrix mixed_sign_matrix(Index m, Index g, Seed seed) {
  return sample_mixed_sign(m, g, seed).matrix;
}

MeasurementMatrix with_affine_offsets(MeasurementMatrix a, const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi, Seed seed) {
  if (lo.size() != a.cols() || hi.size() != a.cols()) {
    throw Error(ErrorKind::invalid_dimension, "bounding box must match the ambient dimension");
  }
  Eigen::VectorXd thresholds(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    Engine rng = make_engine(seed, kRowStream, static_cast<std::uint64_t>(i));
    Eigen::VectorXd anchor(a.cols());
    for (Index k = 0; k < a.cols(); ++k) {
      anchor[k] = boost::random::uniform_real_distribution<double>(lo[k], hi[k])(rng);
    }
    thresholds[i] = a.normals().row(i).dot(anchor);
  }
  a.set_thresholds(std::move(thresholds));
  return a;
}

SignMatrix binarize(const MeasurementMatrix& a, const Eigen::MatrixXd& x) {
  if (a.cols() != x.rows()) {
    throw Error(ErrorKind::invalid_dimension,
                "measurement has " + std::to_string(a.cols()) + " columns but data has " +
                    std::to_string(x.rows()) + " rows");
  }
  // One dot product per entry, in the same order for batch and single-column
  // calls, so a point's code never depends on what it was binarized with.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = a.normals();
  SignMatrix::Storage codes(a.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const auto col = x.col(j);
    for (Index i = 0; i < a.rows(); ++i) {
      // Plain sequential sum: a vectorized reduction could pick a different
      // order depending on the alignment of x.
      const double* r = rows.data() + i * rows.cols();
      double v = 0.0;
      for (Index k = 0; k < rows.cols(); ++k) v += r[k] * col[k];
      if (a.affine()) v -= a.thresholds()[i];
      codes(i, j) = v >= 0.0 ? 1 : -1;
    }
  }
  return SignMatrix(std::move(codes));
}

std::vector<SignCode> binarize_column(const MeasurementMatrix& a, const Eigen::VectorXd& x) {
  const SignMatrix q = binarize(a, Eigen::MatrixXd(x));
  auto col = q.column(0);
  return {col.begin(), col.end()};
}

}  // namespace iscb
