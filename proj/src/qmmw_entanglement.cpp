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

#include "qugal/qmmw_entanglement.hpp"

#include <string>

namespace qugal {

void validate(const BipartiteSplit& split, int n_qubits) {
  if (split.n_a < 1 || split.n_b < 1) throw ConfigError("split: both parts need at least one qubit");
  if (split.total() != n_qubits) {
    throw DimensionError("split " + std::to_string(split.n_a) + "|" + std::to_string(split.n_b) +
                         " does not match a " + std::to_string(n_qubits) + "-qubit state");
  }
}

const char* to_string(Separability s) {
  return s == Separability::separable ? "separable" : "entangled";
}

double auto_qmmw_threshold(int n_qubits, int rounds) {
  return theorem1_bound(n_qubits, rounds) + 0.05;
}

}  // namespace qugal
