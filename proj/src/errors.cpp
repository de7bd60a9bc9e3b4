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

#include "iscb/errors.hpp"

namespace iscb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::infeasible_tuple: return "infeasible-tuple";
    case ErrorKind::pattern_width: return "pattern-width";
    case ErrorKind::unobserved_pattern: return "unobserved-pattern";
    case ErrorKind::empty_data: return "empty-data";
    case ErrorKind::label: return "label";
    case ErrorKind::invalid_iteration: return "invalid-iteration";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::undefined_angle: return "undefined-angle";
    case ErrorKind::degenerate_labels: return "degenerate-labels";
    case ErrorKind::format: return "format";
    case ErrorKind::length: return "length";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::migration: return "migration";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace iscb
