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

#ifndef QUGAL_QMMW_ENTANGLEMENT_HPP
#define QUGAL_QMMW_ENTANGLEMENT_HPP

#include <array>
#include <cmath>
#include <optional>

#include "qugal/linalg.hpp"
#include "qugal/qmmw.hpp"

namespace qugal {

/// Qubits of the register assigned to A (leading) and B (trailing).
struct BipartiteSplit {
  int n_a = 1;
  int n_b = 1;

  int total() const { return n_a + n_b; }
  std::array<int, 2> dims() const { return {n_a, n_b}; }
};

void validate(const BipartiteSplit& split, int n_qubits);

enum class Separability { separable, entangled };

const char* to_string(Separability s);

struct EntanglementVerdict {
  Separability decision = Separability::separable;
  double terminal_gap = 0.0;
  double threshold_used = 0.0;
  TrainingTrace trace;
};

/// Product of the two marginals, (state on A) (x) (state on B).
template <typename Real>
DensityMatrix<Real> constrain_product(const DensityMatrix<Real>& sigma, const BipartiteSplit& split) {
  validate(split, sigma.n_qubits());
  const auto dims = split.dims();
  const CMatrix<Real> on_a = partial_trace(sigma.matrix(), dims, 0);
  const CMatrix<Real> on_b = partial_trace(sigma.matrix(), dims, 1);
  return DensityMatrix<Real>::trusted(tensor_product(on_a, on_b));
}

/// theorem1_bound(N, T) + 0.05
double auto_qmmw_threshold(int n_qubits, int rounds);

/// QMMW with every generator iterate replaced by its product projection.
/// Separable iff |L(avg sigma_G, avg sigma_D) - 1/2| <= threshold.
template <typename Real>
EntanglementVerdict run_entanglement_qmmw(const PureState<Real>& psi, const BipartiteSplit& split,
                                          QmmwConfig config,
                                          std::optional<double> threshold = std::nullopt) {
  validate(split, psi.n_qubits());
  config.n_qubits = psi.n_qubits();
  const DensityMatrix<Real> rho(psi);
  const GeneratorConstraint<Real> constraint = [split](const DensityMatrix<Real>& s) {
    return constrain_product(s, split);
  };
  auto result = run_qmmw(rho, config, constraint);

  EntanglementVerdict verdict;
  verdict.terminal_gap = std::abs(result.trace.final_loss - 0.5);
  verdict.threshold_used = threshold.value_or(auto_qmmw_threshold(config.n_qubits, config.rounds));
  verdict.decision = verdict.terminal_gap <= verdict.threshold_used ? Separability::separable
                                                                     : Separability::entangled;
  verdict.trace = std::move(result.trace);
  return verdict;
}

}  // namespace qugal

#endif  // QUGAL_QMMW_ENTANGLEMENT_HPP
