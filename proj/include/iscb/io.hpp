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
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "iscb/datagen.hpp"
#include "iscb/iscb.hpp"

namespace iscb::io {

// IDX container (MNIST). Magic 0x00 0x00 <type> <rank>, then `rank`
// big-endian uint32 sizes, then the payload. Only unsigned bytes (0x08).
// Files may be gzip-compressed.
struct IdxHeader {
  std::uint8_t type = 0x08;
  std::vector<std::uint32_t> dimensions;
};

struct IdxFile {
  IdxHeader header;
  std::vector<std::uint8_t> payload;
};

IdxFile read_idx(const std::filesystem::path& path);
void write_idx(const std::filesystem::path& path, const IdxFile& file);

/// Images become columns of rows*cols pixels scaled to [0, 1] (row-major
/// within the image). Requires magic 0x00000803.
Eigen::MatrixXd load_idx_images(const std::filesystem::path& path);

/// Digits 0..9 mapped to class ids 1..10. Requires magic 0x00000801.
std::vector<ClassId> load_idx_labels(const std::filesystem::path& path);

struct ImageSet {
  Eigen::MatrixXd images;
  std::vector<ClassId> labels;
};

/// Loads an image/label pair and checks that the counts agree.
ImageSet load_idx_pair(const std::filesystem::path& images, const std::filesystem::path& labels);

/// Loads every MNIST-style pair found in `dir` (train-*, t10k-*, mnist10k-*,
/// optionally .gz) into one pool. Throws `io` if none is present.
ImageSet load_mnist_pool(const std::filesystem::path& dir);

// CSV datasets: header "x1,...,xd,label,split", one row per point.
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data);
std::string dataset_csv(const LabeledDataset& data);
LabeledDataset read_dataset_csv(const std::filesystem::path& path);

// Model files: JSON with explicit field names, matrices as nested arrays,
// patterns as integers tagged with their bit width. Table entries are written
// sorted by (level, measurement, pattern).
inline constexpr int kModelFormatVersion = 1;

std::string model_to_string(const IscbModel& model);
IscbModel model_from_string(const std::string& text);
void save_model(const IscbModel& model, const std::filesystem::path& path);
IscbModel load_model(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace iscb::io
