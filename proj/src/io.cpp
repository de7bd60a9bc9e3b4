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

#include "iscb/io.hpp"

#include <array>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <zlib.h>

#include "iscb/errors.hpp"
#include "json.hpp"

namespace iscb::io {
namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- raw files

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

namespace {

// gzread passes plain files through unchanged, so one reader covers both.
std::vector<std::uint8_t> read_maybe_gzip(const fs::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  if (!f) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> data;
  std::array<std::uint8_t, 1 << 16> chunk{};
  int n = 0;
  while ((n = gzread(f, chunk.data(), static_cast<unsigned>(chunk.size()))) > 0) {
    data.insert(data.end(), chunk.begin(), chunk.begin() + n);
  }
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw Error(ErrorKind::io, "corrupt compressed stream in " + path.string());
  return data;
}

std::uint32_t big_endian(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void require_magic(const IdxFile& f, std::uint8_t rank, const fs::path& path) {
  if (f.header.type != 0x08 || f.header.dimensions.size() != rank) {
    throw Error(ErrorKind::format, fmt::format("{}: expected unsigned-byte IDX of rank {}",
                                               path.string(), rank));
  }
}

}  // namespace

// ---------------------------------------------------------------- IDX

IdxFile read_idx(const fs::path& path) {
  const std::vector<std::uint8_t> raw = read_maybe_gzip(path);
  if (raw.size() < 4) throw Error(ErrorKind::length, path.string() + ": shorter than an IDX magic");
  if (raw[0] != 0 || raw[1] != 0 || raw[2] != 0x08) {
    throw Error(ErrorKind::format, fmt::format("{}: bad IDX magic {:02x}{:02x}{:02x}{:02x}",
                                               path.string(), raw[0], raw[1], raw[2], raw[3]));
  }
  IdxFile f;
  f.header.type = raw[2];
  const std::size_t rank = raw[3];
  if (raw.size() < 4 + 4 * rank) throw Error(ErrorKind::length, path.string() + ": truncated header");
  std::size_t expected = 1;
  for (std::size_t k = 0; k < rank; ++k) {
    const std::uint32_t dim = big_endian(raw.data() + 4 + 4 * k);
    f.header.dimensions.push_back(dim);
    expected *= dim;
  }
  const std::size_t offset = 4 + 4 * rank;
  if (raw.size() - offset != expected) {
    throw Error(ErrorKind::length, fmt::format("{}: payload has {} bytes, header promises {}",
                                               path.string(), raw.size() - offset, expected));
  }
  f.payload.assign(raw.begin() + static_cast<std::ptrdiff_t>(offset), raw.end());
  return f;
}

void write_idx(const fs::path& path, const IdxFile& file) {
  std::string bytes = {0, 0, static_cast<char>(file.header.type),
                       static_cast<char>(file.header.dimensions.size())};
  for (std::uint32_t d : file.header.dimensions) {
    for (int shift = 24; shift >= 0; shift -= 8) bytes.push_back(static_cast<char>((d >> shift) & 0xff));
  }
  bytes.append(file.payload.begin(), file.payload.end());
  if (path.extension() == ".gz") {
    gzFile f = gzopen(path.string().c_str(), "wb9");
    if (!f) throw Error(ErrorKind::io, "cannot write " + path.string());
    const int n = gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(f);
    if (n != static_cast<int>(bytes.size())) throw Error(ErrorKind::io, "write failed for " + path.string());
  } else {
    write_text(path, bytes);
  }
}

Eigen::MatrixXd load_idx_images(const fs::path& path) {
  const IdxFile f = read_idx(path);
  require_magic(f, 3, path);
  const Index count = f.header.dimensions[0];
  const Index pixels = static_cast<Index>(f.header.dimensions[1]) * f.header.dimensions[2];
  Eigen::MatrixXd images(pixels, count);
  for (Index j = 0; j < count; ++j) {
    for (Index i = 0; i < pixels; ++i) {
      images(i, j) = f.payload[static_cast<std::size_t>(j * pixels + i)] / 255.0;
    }
  }
  return images;
}

std::vector<ClassId> load_idx_labels(const fs::path& path) {
  const IdxFile f = read_idx(path);
  require_magic(f, 1, path);
  std::vector<ClassId> labels;
  labels.reserve(f.payload.size());
  for (std::uint8_t digit : f.payload) {
    if (digit > 9) throw Error(ErrorKind::label, fmt::format("{}: label {} is not a digit", path.string(), digit));
    labels.push_back(static_cast<ClassId>(digit) + 1);
  }
  return labels;
}

ImageSet load_idx_pair(const fs::path& images, const fs::path& labels) {
  ImageSet set{load_idx_images(images), load_idx_labels(labels)};
  if (static_cast<std::size_t>(set.images.cols()) != set.labels.size()) {
    throw Error(ErrorKind::consistency, fmt::format("{} images but {} labels", set.images.cols(),
                                                    set.labels.size()));
  }
  return set;
}

ImageSet load_mnist_pool(const fs::path& dir) {
  static const std::array<std::pair<const char*, const char*>, 3> kPairs = {{
      {"train-images-idx3-ubyte", "train-labels-idx1-ubyte"},
      {"t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"},
      {"mnist10k-images-idx3-ubyte", "mnist10k-labels-idx1-ubyte"},
  }};
  std::vector<ImageSet> found;
  for (const auto& [img, lab] : kPairs) {
    for (const char* suffix : {"", ".gz"}) {
      const fs::path i = dir / (std::string(img) + suffix);
      const fs::path l = dir / (std::string(lab) + suffix);
      if (fs::exists(i) && fs::exists(l)) {
        found.push_back(load_idx_pair(i, l));
        break;
      }
    }
  }
  if (found.empty()) throw Error(ErrorKind::io, "no MNIST IDX files in " + dir.string());
  ImageSet pool;
  Index total = 0;
  for (const auto& s : found) total += s.images.cols();
  pool.images.resize(found.front().images.rows(), total);
  Index at = 0;
  for (const auto& s : found) {
    if (s.images.rows() != pool.images.rows()) {
      throw Error(ErrorKind::consistency, "MNIST files disagree on image size");
    }
    pool.images.middleCols(at, s.images.cols()) = s.images;
    pool.labels.insert(pool.labels.end(), s.labels.begin(), s.labels.end());
    at += s.images.cols();
  }
  return pool;
}

// ---------------------------------------------------------------- CSV

std::string dataset_csv(const LabeledDataset& data) {
  std::string out;
  out += fmt::format("# generator={}\n# seed={}\n", data.generator, data.seed);
  for (const auto& [key, value] : data.params) out += fmt::format("# param.{}={}\n", key, value);
  for (Index r = 0; r < data.dimension(); ++r) out += fmt::format("x{},", r + 1);
  out += "label,split\n";
  for (Index j = 0; j < data.size(); ++j) {
    for (Index r = 0; r < data.dimension(); ++r) out += fmt::format("{},", data.points(r, j));
    out += fmt::format("{},{}\n", data.labels[static_cast<std::size_t>(j)],
                       data.split[static_cast<std::size_t>(j)] == Split::train ? "train" : "test");
  }
  return out;
}

void write_dataset_csv(const fs::path& path, const LabeledDataset& data) {
  write_text(path, dataset_csv(data));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::parse, fmt::format("line {}: '{}' is not a number", line, s));
  }
}

}  // namespace

LabeledDataset read_dataset_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  LabeledDataset data;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  std::vector<std::vector<double>> columns;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "generator") data.generator = value;
      else if (key == "seed") data.seed = std::stoull(value);
      else if (key.rfind("param.", 0) == 0) data.params[key.substr(6)] = parse_double(value, lineno);
      continue;
    }
    const auto fields = split_fields(line);
    if (width == 0) {
      if (fields.size() < 3 || fields[fields.size() - 2] != "label" || fields.back() != "split") {
        throw Error(ErrorKind::parse, path.string() + ": missing x1..xd,label,split header");
      }
      width = fields.size();
      continue;
    }
    if (fields.size() != width) {
      throw Error(ErrorKind::parse, fmt::format("{}:{}: expected {} fields", path.string(), lineno, width));
    }
    std::vector<double> col;
    for (std::size_t k = 0; k + 2 < width; ++k) col.push_back(parse_double(fields[k], lineno));
    columns.push_back(std::move(col));
    data.labels.push_back(static_cast<ClassId>(parse_double(fields[width - 2], lineno)));
    if (fields.back() == "train") data.split.push_back(Split::train);
    else if (fields.back() == "test") data.split.push_back(Split::test);
    else throw Error(ErrorKind::parse, fmt::format("{}:{}: split must be train or test", path.string(), lineno));
  }
  if (width == 0) throw Error(ErrorKind::parse, path.string() + ": no header");
  data.points.resize(static_cast<Index>(width - 2), static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t r = 0; r + 2 < width; ++r) {
      data.points(static_cast<Index>(r), static_cast<Index>(j)) = columns[j][r];
    }
  }
  return data;
}

// ---------------------------------------------------------------- models

namespace {

json matrix_json(const MeasurementMatrix& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < a.cols(); ++k) row.push_back(a.normals()(i, k));
    rows.push_back(std::move(row));
  }
  json out = {{"kind", a.kind() == MatrixKind::mixed_sign ? "mixed_sign" : "unconstrained"},
              {"rows", a.rows()},
              {"cols", a.cols()},
              {"normals", std::move(rows)}};
  if (a.affine()) {
    out["thresholds"] = std::vector<double>(a.thresholds().data(), a.thresholds().data() + a.rows());
  }
  return out;
}

MeasurementMatrix matrix_from_json(const json& j) {
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto& normals = j.at("normals");
  if (static_cast<Index>(normals.size()) != rows) throw Error(ErrorKind::parse, "matrix row count");
  Eigen::MatrixXd a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = normals.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols) throw Error(ErrorKind::parse, "matrix column count");
    for (Index k = 0; k < cols; ++k) a(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "mixed_sign" && kind != "unconstrained") throw Error(ErrorKind::parse, "matrix kind " + kind);
  MeasurementMatrix m(std::move(a), kind == "mixed_sign" ? MatrixKind::mixed_sign : MatrixKind::unconstrained);
  if (j.contains("thresholds")) {
    const auto t = j.at("thresholds").get<std::vector<double>>();
    m.set_thresholds(Eigen::Map<const Eigen::VectorXd>(t.data(), static_cast<Index>(t.size())));
  }
  return m;
}

json layer_json(const ScbModel& layer) {
  json slots = json::array();
  for (int level = 1; level <= layer.levels(); ++level) {
    for (int i = 0; i < layer.measurements(); ++i) {
      const auto& slot = layer.table().slot(level, i);
      json patterns = json::array();
      for (std::size_t k = 0; k < slot.patterns.size(); ++k) {
        json entries = json::array();
        for (const auto& e : slot.entries_of(k)) {
          entries.push_back({{"class", e.class_index + 1}, {"count", e.count}, {"score", e.score}});
        }
        patterns.push_back({{"pattern", slot.patterns[k]}, {"entries", std::move(entries)}});
      }
      slots.push_back({{"level", level}, {"measurement", i}, {"bits", level}, {"patterns", std::move(patterns)}});
    }
  }
  return {{"measurements", layer.measurements()},
          {"levels", layer.levels()},
          {"classes", layer.classes()},
          {"tuples", layer.plan().indices()},
          {"table", std::move(slots)}};
}

ScbModel layer_from_json(const json& j) {
  const int m = j.at("measurements").get<int>();
  const int levels = j.at("levels").get<int>();
  const int classes = j.at("classes").get<int>();
  TuplePlan plan(m, j.at("tuples").get<std::vector<std::vector<std::uint32_t>>>());
  if (plan.levels() != levels) throw Error(ErrorKind::consistency, "tuple plan level count");
  MembershipTable table(classes, levels, m);
  const auto& slots = j.at("table");
  if (slots.size() != static_cast<std::size_t>(levels) * static_cast<std::size_t>(m)) {
    throw Error(ErrorKind::consistency, "table must list every (level, measurement) slot");
  }
  for (const auto& s : slots) {
    const int level = s.at("level").get<int>();
    if (s.at("bits").get<int>() != level) throw Error(ErrorKind::consistency, "pattern width must equal level");
    MembershipTable::Slot slot;
    slot.offsets.push_back(0);
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(classes));
    for (const auto& p : s.at("patterns")) {
      slot.patterns.push_back(p.at("pattern").get<Pattern>());
      std::fill(counts.begin(), counts.end(), 0);
      const std::size_t first = slot.entries.size();
      for (const auto& e : p.at("entries")) {
        const int g = e.at("class").get<int>();
        if (g < 1 || g > classes) throw Error(ErrorKind::consistency, "entry class out of range");
        TableEntry entry{static_cast<std::uint32_t>(g - 1), e.at("count").get<std::uint32_t>(),
                         e.at("score").get<double>()};
        counts[entry.class_index] = entry.count;
        slot.entries.push_back(entry);
      }
      // Scores are stored for readability but must agree with the counts.
      const auto expected = membership(counts);
      for (std::size_t k = first; k < slot.entries.size(); ++k) {
        if (slot.entries[k].score != expected[slot.entries[k].class_index]) {
          throw Error(ErrorKind::consistency, "stored score disagrees with its counts");
        }
      }
      slot.offsets.push_back(static_cast<std::uint32_t>(slot.entries.size()));
    }
    table.set_slot(level, s.at("measurement").get<int>(), std::move(slot));
  }
  return ScbModel(std::move(plan), std::move(table));
}

}  // namespace

std::string model_to_string(const IscbModel& model) {
  json layers = json::array();
  for (const auto& l : model.layers()) layers.push_back(layer_json(l));
  json transitions = json::array();
  for (const auto& t : model.transitions()) transitions.push_back(matrix_json(t));
  json doc = {{"format", "iscb-model"},
              {"version", kModelFormatVersion},
              {"variant", to_string(model.variant())},
              {"seed", model.seed()},
              {"classes", model.classes()},
              {"iterations", model.iterations()},
              {"input_measurement", model.input_measurement() ? matrix_json(*model.input_measurement()) : json()},
              {"layers", std::move(layers)},
              {"transitions", std::move(transitions)}};
  return doc.dump(1) + "\n";
}

IscbModel model_from_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "iscb-model") {
      throw Error(ErrorKind::parse, "not an iscb model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorKind::migration, fmt::format("model format version {} is not supported (expected {})",
                                                    version, kModelFormatVersion));
    }
    std::vector<ScbModel> layers;
    for (const auto& l : doc.at("layers")) layers.push_back(layer_from_json(l));
    std::vector<MeasurementMatrix> transitions;
    for (const auto& t : doc.at("transitions")) transitions.push_back(matrix_from_json(t));
    IscbModel model(std::move(layers), std::move(transitions),
                    parse_variant(doc.at("variant").get<std::string>()), doc.at("seed").get<Seed>());
    if (model.classes() != doc.at("classes").get<int>() ||
        model.iterations() != doc.at("iterations").get<int>()) {
      throw Error(ErrorKind::consistency, "header counts disagree with the layers");
    }
    if (!doc.at("input_measurement").is_null()) {
      model.set_input_measurement(matrix_from_json(doc.at("input_measurement")));
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const IscbModel& model, const fs::path& path) { write_text(path, model_to_string(model)); }

IscbModel load_model(const fs::path& path) { return model_from_string(read_text(path)); }

}  // namespace iscb::io
