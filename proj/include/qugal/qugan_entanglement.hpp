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

// Entanglement test with a generator whose CNOTs never cross the A|B cut.
// Such a generator only produces product states, so the game can reach its
// equilibrium value 1/2 only when the target itself is a product state.

#ifndef QUGAL_QUGAN_ENTANGLEMENT_HPP
#define QUGAL_QUGAN_ENTANGLEMENT_HPP

#include <optional>
#include <span>

#include "qugal/circuit.hpp"
#include "qugal/qmmw_entanglement.hpp"
#include "qugal/trainer.hpp"

namespace qugal {

struct LossBand {
  double min = 0.0;
  double max = 0.0;
  int burn_in = 1;  // first round from which every loss stays inside [min, max]
  double mean = 0.0;  // mean loss from burn_in to the end
};

/// The band is the loss range over the trailing `window_fraction` of rounds.
LossBand terminal_band(std::span<const double> losses, double window_fraction = 0.4);

struct QuganEntanglementReport {
  Separability decision = Separability::separable;
  LossBand band;
  double terminal_fidelity = 0.0;
  double threshold = 0.1;
  GanTrainingTrace trace;
  std::size_t generator_gates = 0;
  std::size_t discriminator_gates = 0;
};

inline constexpr double kQuganDefaultThreshold = 0.1;

struct QuganBlocks {
  int generator = 7;
  int discriminator = 3;
};

QuganEntanglementReport make_qugan_report(GanTrainingTrace trace, double threshold);

template <typename Real>
QuganEntanglementReport run_entanglement_qugan(const PureState<Real>& psi, const BipartiteSplit& split,
                                               const TrainerConfig& trainer, QuganBlocks blocks = {},
                                               std::optional<double> threshold = std::nullopt) {
  validate(split, psi.n_qubits());
  auto gen = build_generator_layout(psi.n_qubits(), 0, blocks.generator,
                                    BipartiteRestriction{split.n_a, split.n_b});
  auto disc = build_discriminator_layout(psi.n_qubits(), blocks.discriminator);
  const std::size_t gen_gates = gen.gates.size(), disc_gates = disc.gates.size();
  GanObjective<Real> objective(GanProblem<Real>{DensityMatrix<Real>(psi), 0, 0.5}, std::move(gen),
                               std::move(disc));
  auto result = mw_train(objective, trainer);
  auto report = make_qugan_report(std::move(result.trace), threshold.value_or(kQuganDefaultThreshold));
  report.generator_gates = gen_gates;
  report.discriminator_gates = disc_gates;
  return report;
}

}  // namespace qugal

#endif  // QUGAL_QUGAN_ENTANGLEMENT_HPP
