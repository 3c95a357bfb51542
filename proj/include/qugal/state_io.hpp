// Copyright 2026 The qugal Authors.
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

// Named target states and the plain-text state file format.
//
// Pure state file: one amplitude per line as "re im".
// Density file: a first line holding the dimension D, then D rows of
// 2D numbers (re im pairs, row-major). '#' starts a comment.

#ifndef QUGAL_STATE_IO_HPP
#define QUGAL_STATE_IO_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "qugal/linalg.hpp"

namespace qugal {

using AnyState = std::variant<PureState<double>, DensityMatrix<double>>;

/// Malformed state file; the message carries the offending line number.
class StateFileError : public Error {
 public:
  using Error::Error;
};

AnyState parse_state_text(const std::string& text, const std::string& origin = "<text>");
AnyState load_state_file(const std::filesystem::path& path);

struct Preset {
  std::string name;
  std::string description;
};

std::vector<Preset> list_presets();
bool is_preset(const std::string& name);
AnyState preset_state(const std::string& name);

DensityMatrix<double> as_density(const AnyState& state);
int n_qubits(const AnyState& state);

}  // namespace qugal

#endif  // QUGAL_STATE_IO_HPP
