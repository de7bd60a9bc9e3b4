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

#include <boost/random/mersenne_twister.hpp>

namespace iscb {

using Seed = std::uint64_t;
using Engine = boost::random::mt19937_64;

// Named substreams. A generator's output is a pure function of
// (seed, stream, index), so rows, layers and trials can be produced in any
// order or in parallel without changing results.
namespace stream {
inline constexpr std::uint64_t input_measurement = 1;
inline constexpr std::uint64_t affine_offsets = 2;
inline constexpr std::uint64_t tuple_plan = 3;
inline constexpr std::uint64_t transition = 4;
inline constexpr std::uint64_t dataset = 5;
inline constexpr std::uint64_t wedge = 6;
inline constexpr std::uint64_t svm = 7;
inline constexpr std::uint64_t subset = 8;
inline constexpr std::uint64_t moments = 9;
}  // namespace stream

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(Seed seed, std::uint64_t stream, std::uint64_t index = 0) noexcept;

Engine make_engine(Seed seed, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace iscb
