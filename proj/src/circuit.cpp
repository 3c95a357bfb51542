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

#include "qugal/circuit.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace qugal {

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
  }
  return "?";
}

std::size_t CircuitLayout::rotation_count() const {
  return std::size_t(std::count_if(gates.begin(), gates.end(),
                                   [](const Gate& g) { return g.kind != GateKind::CNOT; }));
}

std::size_t CircuitLayout::cnot_count() const { return gates.size() - rotation_count(); }

void validate(const CircuitLayout& layout) {
  if (layout.n_qubits < 1) throw ConfigError("circuit: width must be positive");
  std::vector<int> uses(std::size_t(std::max(layout.n_params, 0)), 0);
  auto in_range = [&](int q) { return q >= 0 && q < layout.n_qubits; };
  for (std::size_t i = 0; i < layout.gates.size(); ++i) {
    const Gate& g = layout.gates[i];
    const std::string where = "circuit gate " + std::to_string(i) + ": ";
    if (!in_range(g.target)) throw ConfigError(where + "target out of range");
    if (g.kind == GateKind::CNOT) {
      if (!in_range(g.control)) throw ConfigError(where + "control out of range");
      if (g.control == g.target) throw ConfigError(where + "control equals target");
      if (g.param != -1) throw ConfigError(where + "CNOT carries no parameter");
    } else {
      if (g.control != -1) throw ConfigError(where + "rotation has no control");
      if (g.param < 0 || g.param >= layout.n_params) throw ConfigError(where + "parameter index out of range");
      ++uses[std::size_t(g.param)];
    }
  }
  for (std::size_t p = 0; p < uses.size(); ++p) {
    if (uses[p] != 1) {
      throw ConfigError("circuit: parameter " + std::to_string(p) + " used " +
                        std::to_string(uses[p]) + " times");
    }
  }
  const auto& b = layout.block_boundaries;
  if (b.empty()) return;
  if (b.front() != 0 || !std::is_sorted(b.begin(), b.end()) || b.back() > layout.gates.size()) {
    throw ConfigError("circuit: malformed block boundaries");
  }
  const std::size_t first_len = (b.size() > 1 ? b[1] : layout.gates.size()) - b[0];
  for (std::size_t k = 0; k < b.size(); ++k) {
    const std::size_t end = k + 1 < b.size() ? b[k + 1] : layout.gates.size();
    if (end - b[k] != first_len) throw ConfigError("circuit: blocks differ in length");
    for (std::size_t j = 0; j < first_len; ++j) {
      const Gate& g0 = layout.gates[j];
      const Gate& g = layout.gates[b[k] + j];
      if (g.kind != g0.kind || g.target != g0.target || g.control != g0.control) {
        throw ConfigError("circuit: block " + std::to_string(k) + " differs from block 0");
      }
    }
  }
}

namespace {

void add_rotation_layer(CircuitLayout& layout, int n_qubits) {
  for (int q = 0; q < n_qubits; ++q) {
    for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
      layout.gates.push_back({kind, q, -1, layout.n_params++});
    }
  }
}

// CNOT(first -> first+1), ..., CNOT(last-1 -> last)
void add_ladder(CircuitLayout& layout, int first, int last) {
  for (int q = first; q < last; ++q) layout.gates.push_back({GateKind::CNOT, q + 1, q, -1});
}

}  // namespace

CircuitLayout build_generator_layout(int n_data, int n_ancilla, int blocks,
                                     ConnectivityRestriction restriction) {
  if (n_data < 1 || n_ancilla < 0 || blocks < 1) {
    throw ConfigError("generator layout: need n_data >= 1, n_ancilla >= 0, blocks >= 1");
  }
  CircuitLayout layout;
  layout.n_qubits = n_data + n_ancilla;
  const auto* split = std::get_if<BipartiteRestriction>(&restriction);
  if (split != nullptr) {
    if (split->n_a < 1 || split->n_b < 1 || split->n_a + split->n_b != n_data || n_ancilla != 0) {
      throw ConfigError("generator layout: bipartite restriction needs n_a + n_b = n_data and no ancilla");
    }
  }
  for (int k = 0; k < blocks; ++k) {
    layout.block_boundaries.push_back(layout.gates.size());
    add_rotation_layer(layout, layout.n_qubits);
    if (split != nullptr) {
      add_ladder(layout, 0, split->n_a - 1);
      add_ladder(layout, split->n_a, n_data - 1);
    } else {
      add_ladder(layout, 0, layout.n_qubits - 1);
    }
  }
  validate(layout);
  return layout;
}

CircuitLayout build_discriminator_layout(int n_data, int blocks) {
  if (n_data < 1 || blocks < 1) throw ConfigError("discriminator layout: need n_data >= 1, blocks >= 1");
  CircuitLayout layout;
  layout.n_qubits = n_data + 1;
  for (int k = 0; k < blocks; ++k) {
    layout.block_boundaries.push_back(layout.gates.size());
    add_rotation_layer(layout, layout.n_qubits);
    add_ladder(layout, 0, n_data);
  }
  validate(layout);
  return layout;
}

std::string to_text(const CircuitLayout& layout) {
  std::ostringstream out;
  out << "circuit " << layout.n_qubits << ' ' << layout.n_params << '\n';
  std::size_t next_block = 0;
  for (std::size_t i = 0; i < layout.gates.size(); ++i) {
    while (next_block < layout.block_boundaries.size() && layout.block_boundaries[next_block] == i) {
      out << "block\n";
      ++next_block;
    }
    const Gate& g = layout.gates[i];
    if (g.kind == GateKind::CNOT) {
      out << "CNOT " << g.control << ' ' << g.target << '\n';
    } else {
      out << to_string(g.kind) << ' ' << g.target << ' ' << g.param << '\n';
    }
  }
  return out.str();
}

CircuitLayout layout_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CircuitLayout layout;
  bool have_header = false;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("circuit text line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (!have_header) {
      if (word != "circuit" || !(ls >> layout.n_qubits >> layout.n_params)) fail("expected 'circuit <qubits> <params>'");
      have_header = true;
      continue;
    }
    if (word == "block") {
      layout.block_boundaries.push_back(layout.gates.size());
      continue;
    }
    Gate g;
    if (word == "CNOT") {
      g.kind = GateKind::CNOT;
      if (!(ls >> g.control >> g.target)) fail("expected 'CNOT <control> <target>'");
    } else {
      if (word == "RX") g.kind = GateKind::RX;
      else if (word == "RY") g.kind = GateKind::RY;
      else if (word == "RZ") g.kind = GateKind::RZ;
      else fail("unknown gate '" + word + "'");
      if (!(ls >> g.target >> g.param)) fail("expected '" + word + " <target> <param>'");
    }
    if (ls >> word) fail("trailing tokens");
    layout.gates.push_back(g);
  }
  if (!have_header) throw ConfigError("circuit text: missing header");
  validate(layout);
  return layout;
}

}  // namespace qugal
