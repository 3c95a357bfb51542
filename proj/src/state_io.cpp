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

#include "qugal/state_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qugal {

namespace {

constexpr double kFileTolerance = 1e-6;

struct Row {
  int line = 0;
  std::vector<double> values;
};

std::vector<Row> tokenize(const std::string& text, const std::string& origin) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Row row{line_no, {}};
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v)) {
        throw StateFileError(origin + ":" + std::to_string(line_no) + ": not a finite number: '" +
                             token + "'");
      }
      row.values.push_back(v);
    }
    if (!row.values.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw StateFileError(origin + ": no data rows");
  return rows;
}

std::string at(const std::string& origin, int line) { return origin + ":" + std::to_string(line) + ": "; }

AnyState parse_pure(const std::vector<Row>& rows, const std::string& origin) {
  CVector<double> amps(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != 2) {
      throw StateFileError(at(origin, rows[i].line) + "expected 're im', got " +
                           std::to_string(rows[i].values.size()) + " values");
    }
    amps(Eigen::Index(i)) = {rows[i].values[0], rows[i].values[1]};
  }
  const auto dim = amps.size();
  if ((dim & (dim - 1)) != 0) {
    throw StateFileError(origin + ": " + std::to_string(dim) + " amplitudes is not a power of two");
  }
  const double dev = std::abs(amps.squaredNorm() - 1.0);
  if (dev > kFileTolerance) {
    throw StateFileError(origin + ": squared norm deviates from 1 by " + std::to_string(dev) +
                         " (lines " + std::to_string(rows.front().line) + "-" +
                         std::to_string(rows.back().line) + ")");
  }
  return PureState<double>::normalized(std::move(amps));
}

AnyState parse_density(const std::vector<Row>& rows, const std::string& origin) {
  const double header = rows.front().values.front();
  const auto dim = Eigen::Index(header);
  if (double(dim) != header || dim < 1 || (dim & (dim - 1)) != 0) {
    throw StateFileError(at(origin, rows.front().line) + "dimension must be a power of two");
  }
  if (Eigen::Index(rows.size()) != dim + 1) {
    throw StateFileError(origin + ": expected " + std::to_string(dim) + " matrix rows after the header, got " +
                         std::to_string(rows.size() - 1));
  }
  CMatrix<double> m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Row& row = rows[std::size_t(i + 1)];
    if (Eigen::Index(row.values.size()) != 2 * dim) {
      throw StateFileError(at(origin, row.line) + "expected " + std::to_string(2 * dim) +
                           " values (re im pairs), got " + std::to_string(row.values.size()));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      m(i, j) = {row.values[std::size_t(2 * j)], row.values[std::size_t(2 * j + 1)]};
    }
  }
  if (hermiticity_defect(m) > kFileTolerance) throw StateFileError(origin + ": matrix is not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kFileTolerance) {
    throw StateFileError(origin + ": trace is " + std::to_string(tr) + ", expected 1");
  }
  m = hermitian_part(m) / tr;
  try {
    return DensityMatrix<double>(std::move(m));
  } catch (const NumericalError& e) {
    throw StateFileError(origin + ": " + e.what());
  }
}

}  // namespace

AnyState parse_state_text(const std::string& text, const std::string& origin) {
  const auto rows = tokenize(text, origin);
  if (rows.front().values.size() == 1) return parse_density(rows, origin);
  return parse_pure(rows, origin);
}

AnyState load_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateFileError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str(), path.string());
}

std::vector<Preset> list_presets() {
  return {
      {"rho-sep-4q", "1/2 |0000><0000| + 1/2 |1111><1111|"},
      {"psi-sep", "(|00> + |10>)_A (x) |00>_B / sqrt(2)"},
      {"ghz-4q", "(|0000> + |1111>) / sqrt(2)"},
      {"zero-4q", "|0000>"},
      {"mixed-1q", "I / 2"},
  };
}

bool is_preset(const std::string& name) {
  for (const auto& p : list_presets()) {
    if (p.name == name) return true;
  }
  return false;
}

AnyState preset_state(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  CVector<double> v = CVector<double>::Zero(16);
  if (name == "rho-sep-4q") {
    CMatrix<double> m = CMatrix<double>::Zero(16, 16);
    m(0, 0) = m(15, 15) = 0.5;
    return DensityMatrix<double>(m);
  }
  if (name == "psi-sep") {
    v(0b0000) = v(0b1000) = h;
    return PureState<double>::normalized(v);
  }
  if (name == "ghz-4q") {
    v(0b0000) = v(0b1111) = h;
    return PureState<double>::normalized(v);
  }
  if (name == "zero-4q") return PureState<double>::basis(4, 0);
  if (name == "mixed-1q") return DensityMatrix<double>::maximally_mixed(1);
  throw StateFileError("unknown preset '" + name + "'");
}

DensityMatrix<double> as_density(const AnyState& state) {
  return std::visit([](const auto& s) { return DensityMatrix<double>(s); }, state);
}

int n_qubits(const AnyState& state) {
  return std::visit([](const auto& s) { return s.n_qubits(); }, state);
}

}  // namespace qugal
