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

#include "qugal/qugan_entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qugal {

LossBand terminal_band(std::span<const double> losses, double window_fraction) {
  if (losses.empty()) throw ConfigError("terminal_band: empty loss series");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw ConfigError("terminal_band: window fraction must lie in (0, 1]");
  }
  const std::size_t n = losses.size();
  const auto window = std::max<std::size_t>(1, std::size_t(std::ceil(window_fraction * double(n))));
  const std::size_t start = n - window;
  const auto [lo, hi] = std::minmax_element(losses.begin() + std::ptrdiff_t(start), losses.end());
  LossBand band;
  band.min = *lo;
  band.max = *hi;
  std::size_t first = start;
  while (first > 0 && losses[first - 1] >= band.min && losses[first - 1] <= band.max) --first;
  band.burn_in = int(first) + 1;
  band.mean = std::accumulate(losses.begin() + std::ptrdiff_t(first), losses.end(), 0.0) /
              double(n - first);
  return band;
}

QuganEntanglementReport make_qugan_report(GanTrainingTrace trace, double threshold) {
  std::vector<double> losses;
  losses.reserve(trace.rounds.size());
  for (const auto& r : trace.rounds) losses.push_back(r.loss);
  QuganEntanglementReport report;
  report.band = terminal_band(losses);
  report.threshold = threshold;
  report.terminal_fidelity = trace.final_fidelity;
  report.decision = std::abs(report.band.mean - 0.5) <= threshold ? Separability::separable
                                                                  : Separability::entangled;
  report.trace = std::move(trace);
  return report;
}

}  // namespace qugal
