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

#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "iscb/datagen.hpp"
#include "iscb/errors.hpp"
#include "iscb/io.hpp"
#include "iscb/iscb.hpp"

using namespace iscb;
namespace fs = std::filesystem;

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

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("iscb_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string bytes(std::initializer_list<int> v) {
  std::string s;
  for (int b : v) s.push_back(static_cast<char>(b));
  return s;
}

io::IdxFile tiny_images() {
  io::IdxFile f;
  f.header.dimensions = {2, 2, 3};
  f.payload = {0, 255, 51, 102, 153, 204, 1, 2, 3, 4, 5, 6};
  return f;
}

IscbModel small_model(bool affine) {
  const auto d = gen_sandwich(30, 60, 2);
  IscbOptions opt;
  opt.classes = 2;
  opt.iterations = 3;
  opt.shapes = {{40, 2}};
  opt.seed = 5;
  InputOptions in;
  in.affine = affine;
  return train_on_data(d.points_of(Split::train), d.labels_of(Split::train), opt, in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("IDX images from plain and compressed files") {
  Scratch s;
  const auto f = tiny_images();
  io::write_idx(s / "img.idx", f);
  io::write_idx(s / "img.idx.gz", f);
  // Hand-assembled bytes: magic, three big-endian dimensions, payload.
  const std::string expected =
      bytes({0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 3, 0, 255, 51, 102, 153, 204, 1, 2, 3, 4, 5, 6});
  CHECK(io::read_text(s / "img.idx") == expected);
  CHECK(io::read_text(s / "img.idx.gz") != expected);
  for (const char* name : {"img.idx", "img.idx.gz"}) {
    const auto back = io::read_idx(s / name);
    CHECK(back.header.dimensions == f.header.dimensions);
    CHECK(back.payload == f.payload);
    const auto images = io::load_idx_images(s / name);
    REQUIRE(images.rows() == 6);
    REQUIRE(images.cols() == 2);
    CHECK(images(1, 0) == 1.0);
    CHECK(images(2, 0) == 0.2);
    CHECK(images(0, 1) == 0.0 + 1.0 / 255);
  }
}

TEST_CASE("IDX labels shift digits to class ids") {
  Scratch s;
  io::write_text(s / "lab.idx", bytes({0, 0, 8, 1, 0, 0, 0, 3, 0, 9, 4}));
  CHECK(io::load_idx_labels(s / "lab.idx") == std::vector<ClassId>{1, 10, 5});
  io::write_text(s / "bad.idx", bytes({0, 0, 8, 1, 0, 0, 0, 1, 12}));
  CHECK(kind_of([&] { io::load_idx_labels(s / "bad.idx"); }) == ErrorKind::label);
}

TEST_CASE("IDX failures") {
  Scratch s;
  io::write_text(s / "magic.idx", bytes({1, 0, 8, 1, 0, 0, 0, 1, 3}));
  CHECK(kind_of([&] { io::read_idx(s / "magic.idx"); }) == ErrorKind::format);
  io::write_text(s / "short.idx", bytes({0, 0, 8, 1, 0, 0, 0, 4, 3, 3}));
  CHECK(kind_of([&] { io::read_idx(s / "short.idx"); }) == ErrorKind::length);
  io::write_text(s / "header.idx", bytes({0, 0, 8, 3, 0, 0}));
  CHECK(kind_of([&] { io::read_idx(s / "header.idx"); }) == ErrorKind::length);
  CHECK(kind_of([&] { io::read_idx(s / "missing.idx"); }) == ErrorKind::io);
  // Images must be rank 3 and labels rank 1.
  io::write_text(s / "lab.idx", bytes({0, 0, 8, 1, 0, 0, 0, 1, 3}));
  CHECK(kind_of([&] { io::load_idx_images(s / "lab.idx"); }) == ErrorKind::format);
  io::write_idx(s / "img.idx", tiny_images());
  io::write_text(s / "three.idx", bytes({0, 0, 8, 1, 0, 0, 0, 3, 1, 2, 3}));
  CHECK(kind_of([&] { io::load_idx_pair(s / "img.idx", s / "three.idx"); }) == ErrorKind::consistency);
  io::write_text(s / "two.idx", bytes({0, 0, 8, 1, 0, 0, 0, 2, 7, 0}));
  const auto pair = io::load_idx_pair(s / "img.idx", s / "two.idx");
  CHECK(pair.images.cols() == 2);
  CHECK(pair.labels == std::vector<ClassId>{8, 1});
}

TEST_CASE("bundled digit subset has the expected header") {
  const fs::path dir = fs::path(ISCB_SOURCE_DIR) / "data" / "mnist";
  const fs::path images = dir / "mnist10k-images-idx3-ubyte.gz";
  if (!fs::exists(images)) {
    MESSAGE("no bundled digits; skipped");
    return;
  }
  const auto f = io::read_idx(images);
  CHECK(f.header.dimensions == std::vector<std::uint32_t>{10000, 28, 28});
  const auto pool = io::load_mnist_pool(dir);
  CHECK(pool.images.rows() == 784);
  CHECK(pool.images.cols() == 10000);
  CHECK(pool.labels.size() == 10000);
  CHECK(pool.images.minCoeff() >= 0.0);
  CHECK(pool.images.maxCoeff() <= 1.0);
}

TEST_CASE("dataset CSV round trip") {
  Scratch s;
  const auto d = gen_arcs(20, 3);
  io::write_dataset_csv(s / "arcs.csv", d);
  const auto back = io::read_dataset_csv(s / "arcs.csv");
  CHECK(back.points == d.points);
  CHECK(back.labels == d.labels);
  CHECK(back.split == d.split);
  CHECK(back.generator == d.generator);
  CHECK(back.seed == d.seed);
  CHECK(back.params == d.params);
  CHECK(io::dataset_csv(back) == io::dataset_csv(d));

  io::write_text(s / "junk.csv", "x1,x2,label,split\n1,2,1,train\n1,zz,2,test\n");
  CHECK(kind_of([&] { io::read_dataset_csv(s / "junk.csv"); }) == ErrorKind::parse);
  io::write_text(s / "split.csv", "x1,label,split\n1,1,maybe\n");
  CHECK(kind_of([&] { io::read_dataset_csv(s / "split.csv"); }) == ErrorKind::parse);
}

TEST_CASE("model round trip preserves every prediction") {
  Scratch s;
  for (bool affine : {false, true}) {
    const auto model = small_model(affine);
    io::save_model(model, s / "m.json");
    const auto back = io::load_model(s / "m.json");
    CHECK(back == model);
    std::mt19937 rng(affine ? 2 : 1);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int t = 0; t < 100; ++t) {
      const Eigen::Vector2d x(u(rng), u(rng));
      const auto code = encode(model, x);
      CHECK(predict(back, x) == predict(model, x));
      CHECK(score_iterative(back, code.column(0)).values == score_iterative(model, code.column(0)).values);
    }
    io::save_model(back, s / "again.json");
    CHECK(io::read_text(s / "again.json") == io::read_text(s / "m.json"));
  }
}

TEST_CASE("damaged model files") {
  const std::string good = io::model_to_string(small_model(false));
  CHECK(kind_of([&] { io::model_from_string(good.substr(0, good.size() / 2)); }) == ErrorKind::parse);
  CHECK(kind_of([&] { io::model_from_string("[1, 2]"); }) == ErrorKind::parse);

  std::string bumped = good;
  const auto at = bumped.find("\"version\": 1");
  REQUIRE(at != std::string::npos);
  bumped.replace(at, 12, "\"version\": 2");
  CHECK(kind_of([&] { io::model_from_string(bumped); }) == ErrorKind::migration);

  // Editing a stored score without its counts is caught.
  auto doc = nlohmann::json::parse(good);
  auto& entry = doc["layers"][0]["table"][0]["patterns"][0]["entries"][0];
  entry["score"] = entry["score"].get<double>() + 0.125;
  CHECK(kind_of([&] { io::model_from_string(doc.dump()); }) == ErrorKind::consistency);
}

}  // TEST_SUITE
