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

#include "qugal/qmmw.hpp"

#include <cmath>
#include <string>

namespace qugal {

double resolve_epsilon(const QmmwConfig& config) {
  if (config.n_qubits < 1 || config.rounds < 1) {
    throw ConfigError("qmmw: n_qubits and rounds must be positive");
  }
  const double base = std::sqrt(double(config.n_qubits) / double(config.rounds));
  double eps = 0.0;
  switch (config.epsilon_rule) {
    case EpsilonRule::sqrt_n_over_t:
      eps = base;
      break;
    case EpsilonRule::twice_sqrt_n_over_t:
      eps = 2.0 * base;
      break;
    case EpsilonRule::fixed:
      if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
        throw ConfigError("qmmw: epsilon must be positive");
      }
      return config.epsilon;
  }
  if (eps > 0.5) {
    throw ConfigError("qmmw: automatic epsilon " + std::to_string(eps) +
                      " exceeds 1/2; T = " + std::to_string(config.rounds) +
                      " is too small for N = " + std::to_string(config.n_qubits));
  }
  return eps;
}

void validate(const QmmwConfig& config) {
  if (config.n_qubits < 1 || config.n_qubits > 8) throw ConfigError("qmmw: n_qubits must be in [1, 8]");
  if (config.rounds < 1) throw ConfigError("qmmw: rounds must be positive");
  if (config.generator_sign != 1 && config.generator_sign != -1) {
    throw ConfigError("qmmw: generator_sign must be +1 or -1");
  }
  if (config.discriminator_sign != 1 && config.discriminator_sign != -1) {
    throw ConfigError("qmmw: discriminator_sign must be +1 or -1");
  }
  if (config.record_interval < 1) throw ConfigError("qmmw: record_interval must be positive");
  (void)resolve_epsilon(config);
}

double theorem1_bound(int n_qubits, int rounds) {
  if (n_qubits < 1 || rounds < 1) throw ConfigError("theorem1_bound: arguments must be positive");
  return 3.0 * std::sqrt(double(n_qubits) / double(rounds));
}

double generator_regret_bound(double epsilon, int n_qubits, int rounds) {
  return (epsilon * epsilon * rounds + n_qubits) / (2.0 * epsilon * rounds);
}

double discriminator_regret_bound(double epsilon, int n_qubits, int rounds) {
  return (epsilon * epsilon * rounds + n_qubits + 1) / (2.0 * epsilon * rounds);
}

}  // namespace qugal
