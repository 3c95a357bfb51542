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

#include "qugal/trainer.hpp"

#include <cmath>
#include <numeric>

namespace qugal {

const char* to_string(Direction d) { return d == Direction::ascend ? "ascend" : "descend"; }

void validate(const TrainerConfig& config) {
  if (config.rounds < 1) throw ConfigError("trainer: rounds must be >= 1");
  if (config.inner_iterations < 1) throw ConfigError("trainer: inner_iterations must be >= 1");
  // alpha = 0 and eta = 1 are admitted as reduction cases.
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw ConfigError("trainer: learning_rate must be finite and non-negative");
  }
  if (!(config.scale > 0.0 && config.scale <= 1.0)) throw ConfigError("trainer: scale must lie in (0, 1]");
  if (!(config.init_low <= config.init_high)) throw ConfigError("trainer: empty init range");
}

std::vector<double> compute_weights(std::span<const double> inner_losses, double eta) {
  if (inner_losses.empty()) throw ConfigError("compute_weights: no losses");
  for (double l : inner_losses) {
    if (!(l >= 0.0)) throw ConfigError("compute_weights: negative loss");
  }
  const double total = std::accumulate(inner_losses.begin(), inner_losses.end(), 0.0);
  std::vector<double> w(inner_losses.size());
  if (total == 0.0) {
    std::fill(w.begin(), w.end(), eta / double(w.size()));
    return w;
  }
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = eta * inner_losses[k] / total;
  return w;
}

}  // namespace qugal
