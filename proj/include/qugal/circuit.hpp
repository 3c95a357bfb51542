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

// State-vector simulation of rotation/CNOT circuits and the adversarial loss
// built from them.
//
// Rotations are R_P(theta) = exp(-i theta P / 2). The discriminator acts on
// the data register plus one trailing ancilla that starts in |0> and is
// accepted on outcome 0.

#ifndef QUGAL_CIRCUIT_HPP
#define QUGAL_CIRCUIT_HPP

#include <cmath>
#include <cstddef>
#include <array>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qugal/linalg.hpp"

namespace qugal {

enum class GateKind { RX, RY, RZ, CNOT };

const char* to_string(GateKind kind);

struct Gate {
  GateKind kind = GateKind::RX;
  int target = 0;
  int control = -1;  // CNOT only
  int param = -1;    // rotations only

  bool operator==(const Gate&) const = default;
};

struct CircuitLayout {
  int n_qubits = 0;
  std::vector<Gate> gates;
  int n_params = 0;
  std::vector<std::size_t> block_boundaries;  // gate index where each block starts

  bool operator==(const CircuitLayout&) const = default;

  std::size_t rotation_count() const;
  std::size_t cnot_count() const;
};

/// Checks gate indices, one-shot parameter use and identical block shapes.
void validate(const CircuitLayout& layout);

struct NoRestriction {};
struct BipartiteRestriction {
  int n_a = 1;
  int n_b = 1;
};
using ConnectivityRestriction = std::variant<NoRestriction, BipartiteRestriction>;

/// Blocks of (RX, RY, RZ on every qubit) followed by a nearest-neighbor CNOT
/// ladder. Under a bipartite restriction there is one ladder inside A and one
/// inside B, so no CNOT crosses the cut.
CircuitLayout build_generator_layout(int n_data, int n_ancilla, int blocks,
                                     ConnectivityRestriction restriction = NoRestriction{});

/// Width n_data + 1; each block ends with a CNOT onto the ancilla.
CircuitLayout build_discriminator_layout(int n_data, int blocks);

/// One gate per line:
///   circuit <n_qubits> <n_params>
///   block
///   RX <target> <param>
///   CNOT <control> <target>
std::string to_text(const CircuitLayout& layout);
CircuitLayout layout_from_text(const std::string& text);

template <typename Real>
using ParameterVector = RVector<Real>;

namespace detail {

template <typename Real>
void apply_rotation(CVector<Real>& psi, int n_qubits, const Gate& g, Real theta) {
  const Eigen::Index stride = Eigen::Index{1} << (n_qubits - 1 - g.target);
  const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Eigen::Index dim = psi.size();
  Complex<Real>* a = psi.data();
  for (Eigen::Index base = 0; base < dim; base += 2 * stride) {
    for (Eigen::Index i = base; i < base + stride; ++i) {
      const Complex<Real> x0 = a[i], x1 = a[i + stride];
      switch (g.kind) {
        case GateKind::RX:
          a[i] = Complex<Real>(c * x0.real() + s * x1.imag(), c * x0.imag() - s * x1.real());
          a[i + stride] = Complex<Real>(c * x1.real() + s * x0.imag(), c * x1.imag() - s * x0.real());
          break;
        case GateKind::RY:
          a[i] = c * x0 - s * x1;
          a[i + stride] = s * x0 + c * x1;
          break;
        case GateKind::RZ:
          a[i] = x0 * Complex<Real>(c, -s);
          a[i + stride] = x1 * Complex<Real>(c, s);
          break;
        case GateKind::CNOT:
          break;
      }
    }
  }
}

template <typename Real>
void apply_cnot(CVector<Real>& psi, int n_qubits, const Gate& g) {
  const Eigen::Index cbit = Eigen::Index{1} << (n_qubits - 1 - g.control);
  const Eigen::Index tbit = Eigen::Index{1} << (n_qubits - 1 - g.target);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(psi(i), psi(i | tbit));
  }
}

}  // namespace detail

/// In-place application of every gate in order; no validation.
template <typename Real>
void apply_circuit_inplace(const CircuitLayout& circuit, const ParameterVector<Real>& params,
                           CVector<Real>& psi) {
  for (const Gate& g : circuit.gates) {
    if (g.kind == GateKind::CNOT) {
      detail::apply_cnot(psi, circuit.n_qubits, g);
    } else {
      detail::apply_rotation(psi, circuit.n_qubits, g, params(g.param));
    }
  }
}

template <typename Real>
void require_compatible(const CircuitLayout& circuit, const ParameterVector<Real>& params,
                        int width) {
  if (circuit.n_qubits != width) {
    throw DimensionError("circuit width " + std::to_string(circuit.n_qubits) +
                         " does not match input width " + std::to_string(width));
  }
  if (params.size() != circuit.n_params) {
    throw DimensionError("circuit expects " + std::to_string(circuit.n_params) +
                         " parameters, got " + std::to_string(params.size()));
  }
  if (!params.allFinite()) throw NumericalError("circuit parameters must be finite");
}

template <typename Real>
PureState<Real> apply_circuit(const CircuitLayout& circuit, const ParameterVector<Real>& params,
                              const PureState<Real>& input) {
  require_compatible(circuit, params, input.n_qubits());
  CVector<Real> psi = input.amplitudes();
  apply_circuit_inplace(circuit, params, psi);
  return PureState<Real>::normalized(std::move(psi));
}

/// Dense unitary of the circuit, column j = U |j>.
template <typename Real>
CMatrix<Real> circuit_unitary(const CircuitLayout& circuit, const ParameterVector<Real>& params) {
  const auto dim = Eigen::Index(qubit_dim(circuit.n_qubits));
  CMatrix<Real> u(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CVector<Real> e = CVector<Real>::Zero(dim);
    e(j) = Real(1);
    apply_circuit_inplace(circuit, params, e);
    u.col(j) = e;
  }
  return u;
}

template <typename Real>
CVector<Real> zero_state_output(const CircuitLayout& layout, const ParameterVector<Real>& theta) {
  CVector<Real> psi = CVector<Real>::Zero(Eigen::Index(qubit_dim(layout.n_qubits)));
  psi(0) = Real(1);
  apply_circuit_inplace(layout, theta, psi);
  return psi;
}

/// Tr_a(U |0><0| U^dagger), ancillas being the trailing qubits.
template <typename Real>
DensityMatrix<Real> generated_state(const CircuitLayout& layout, const ParameterVector<Real>& theta,
                                    int n_data, int n_ancilla) {
  if (n_data < 1 || n_ancilla < 0) throw DimensionError("generated_state: bad register sizes");
  require_compatible(layout, theta, n_data + n_ancilla);
  const CVector<Real> psi = zero_state_output(layout, theta);
  const CMatrix<Real> full = psi * psi.adjoint();
  if (n_ancilla == 0) return DensityMatrix<Real>::trusted(full);
  const std::array<int, 2> dims{n_data, n_ancilla};
  return DensityMatrix<Real>::trusted(partial_trace(full, dims, 0));
}

/// A mixed state as weighted pure components (its eigendecomposition).
template <typename Real>
struct StateComponents {
  std::vector<Real> weights;
  std::vector<CVector<Real>> vectors;
};

template <typename Real>
StateComponents<Real> pure_components(const DensityMatrix<Real>& rho) {
  const auto eig = herm_eig(rho.matrix());
  StateComponents<Real> out;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > Real(1e-14)) {
      out.weights.push_back(eig.eigenvalues(i));
      out.vectors.push_back(eig.eigenvectors.col(i));
    }
  }
  return out;
}

template <typename Real>
StateComponents<Real> pure_components(const PureState<Real>& psi) {
  return {{Real(1)}, {psi.amplitudes()}};
}

/// Probability that the ancilla of |v>|0> reads 0 after the discriminator.
template <typename Real>
Real accept_prob_pure(const CircuitLayout& disc, const ParameterVector<Real>& gamma,
                      const CVector<Real>& v) {
  CVector<Real> psi = CVector<Real>::Zero(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) psi(2 * i) = v(i);
  apply_circuit_inplace(disc, gamma, psi);
  Real p = 0;
  for (Eigen::Index i = 0; i < psi.size(); i += 2) p += std::norm(psi(i));
  return p;
}

template <typename Real>
Real accept_prob(const CircuitLayout& disc, const ParameterVector<Real>& gamma,
                 const StateComponents<Real>& input) {
  Real p = 0;
  for (std::size_t i = 0; i < input.weights.size(); ++i) {
    p += input.weights[i] * accept_prob_pure(disc, gamma, input.vectors[i]);
  }
  return std::clamp(p, Real(0), Real(1));
}

/// Tr(M_D (input (x) |0><0|)) with M_D = U_D^dagger (I (x) |0><0|) U_D.
template <typename Real>
Real discriminator_accept_prob(const CircuitLayout& disc, const ParameterVector<Real>& gamma,
                               const DensityMatrix<Real>& input) {
  require_compatible(disc, gamma, input.n_qubits() + 1);
  return accept_prob(disc, gamma, pure_components(input));
}

template <typename Real = double>
struct GanProblem {
  DensityMatrix<Real> target;
  int n_ancilla_gen = 0;
  double prior_real = 0.5;  // P(R); P(G) = 1 - P(R)

  int n_data() const { return target.n_qubits(); }
  double prior_gen() const { return 1.0 - prior_real; }
};

template <typename Real>
void validate(const GanProblem<Real>& problem) {
  if (problem.n_ancilla_gen < 0 || problem.n_ancilla_gen > problem.n_data()) {
    throw ConfigError("gan problem: ancilla count must lie in [0, N]");
  }
  if (!(problem.prior_real >= 0.0 && problem.prior_real <= 1.0)) {
    throw ConfigError("gan problem: prior must lie in [0, 1]");
  }
}

/// Adversarial loss evaluator with the target decomposition cached.
///   L = P(R) accept(rho) + P(G) (1 - accept(sigma_G))
template <typename Real = double>
class GanObjective {
 public:
  GanObjective(GanProblem<Real> problem, CircuitLayout gen, CircuitLayout disc)
      : problem_(std::move(problem)), gen_(std::move(gen)), disc_(std::move(disc)) {
    validate(problem_);
    validate(gen_);
    validate(disc_);
    if (gen_.n_qubits != problem_.n_data() + problem_.n_ancilla_gen) {
      throw DimensionError("generator width must equal data + ancilla qubits");
    }
    if (disc_.n_qubits != problem_.n_data() + 1) {
      throw DimensionError("discriminator width must equal data qubits + 1");
    }
    target_ = pure_components(problem_.target);
  }

  const GanProblem<Real>& problem() const { return problem_; }
  const CircuitLayout& generator() const { return gen_; }
  const CircuitLayout& discriminator() const { return disc_; }

  StateComponents<Real> generator_components(const ParameterVector<Real>& theta) const {
    require_compatible(gen_, theta, gen_.n_qubits);
    if (problem_.n_ancilla_gen == 0) return {{Real(1)}, {zero_state_output(gen_, theta)}};
    return pure_components(
        generated_state(gen_, theta, problem_.n_data(), problem_.n_ancilla_gen));
  }

  DensityMatrix<Real> generated(const ParameterVector<Real>& theta) const {
    return generated_state(gen_, theta, problem_.n_data(), problem_.n_ancilla_gen);
  }

  Real accept_real(const ParameterVector<Real>& gamma) const {
    require_compatible(disc_, gamma, disc_.n_qubits);
    return accept_prob(disc_, gamma, target_);
  }

  Real accept_generated(const ParameterVector<Real>& gamma,
                        const StateComponents<Real>& generated) const {
    require_compatible(disc_, gamma, disc_.n_qubits);
    return accept_prob(disc_, gamma, generated);
  }

  Real combine(Real accept_real, Real accept_gen) const {
    return Real(problem_.prior_real) * accept_real +
           Real(problem_.prior_gen()) * (Real(1) - accept_gen);
  }

  Real loss(const ParameterVector<Real>& theta, const ParameterVector<Real>& gamma) const {
    return combine(accept_real(gamma), accept_generated(gamma, generator_components(theta)));
  }

  Real fidelity_to_target(const ParameterVector<Real>& theta) const {
    return fidelity(problem_.target, generated(theta));
  }

 private:
  GanProblem<Real> problem_;
  CircuitLayout gen_;
  CircuitLayout disc_;
  StateComponents<Real> target_;
};

template <typename Real>
Real qugan_loss(const CircuitLayout& gen_layout, const ParameterVector<Real>& theta,
                const CircuitLayout& disc_layout, const ParameterVector<Real>& gamma,
                const GanProblem<Real>& problem) {
  return GanObjective<Real>(problem, gen_layout, disc_layout).loss(theta, gamma);
}

/// (L(theta_i + pi/2) - L(theta_i - pi/2)) / 2, exact for exp(-i theta P / 2).
template <typename Real, typename LossFn>
Real parameter_shift_gradient(LossFn&& loss, const ParameterVector<Real>& params, Eigen::Index index) {
  if (index < 0 || index >= params.size()) {
    throw DimensionError("parameter_shift_gradient: index out of range");
  }
  constexpr Real shift = std::numbers::pi_v<Real> / 2;
  ParameterVector<Real> p = params;
  p(index) = params(index) + shift;
  const Real up = loss(p);
  p(index) = params(index) - shift;
  const Real down = loss(p);
  return (up - down) / 2;
}

template <typename Real, typename LossFn>
Real central_difference_gradient(LossFn&& loss, const ParameterVector<Real>& params,
                                 Eigen::Index index, Real h = Real(1e-5)) {
  if (index < 0 || index >= params.size()) {
    throw DimensionError("central_difference_gradient: index out of range");
  }
  ParameterVector<Real> p = params;
  p(index) = params(index) + h;
  const Real up = loss(p);
  p(index) = params(index) - h;
  const Real down = loss(p);
  return (up - down) / (2 * h);
}

enum class GradientMethod { parameter_shift, finite_difference };

template <typename Real, typename LossFn>
ParameterVector<Real> gradient(LossFn&& loss, const ParameterVector<Real>& params,
                               GradientMethod method = GradientMethod::parameter_shift) {
  ParameterVector<Real> g(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    g(i) = method == GradientMethod::parameter_shift
               ? parameter_shift_gradient(loss, params, i)
               : central_difference_gradient(loss, params, i);
  }
  return g;
}

/// dL/dtheta; the real-data term does not depend on theta and is evaluated once.
template <typename Real>
ParameterVector<Real> generator_gradient(const GanObjective<Real>& obj,
                                         const ParameterVector<Real>& theta,
                                         const ParameterVector<Real>& gamma,
                                         GradientMethod method = GradientMethod::parameter_shift) {
  const Real real_term = obj.accept_real(gamma);
  auto loss = [&](const ParameterVector<Real>& t) {
    return obj.combine(real_term, obj.accept_generated(gamma, obj.generator_components(t)));
  };
  return gradient(loss, theta, method);
}

/// dL/dgamma with the generated state held fixed.
template <typename Real>
ParameterVector<Real> discriminator_gradient(const GanObjective<Real>& obj,
                                             const ParameterVector<Real>& theta,
                                             const ParameterVector<Real>& gamma,
                                             GradientMethod method = GradientMethod::parameter_shift) {
  const auto generated = obj.generator_components(theta);
  auto loss = [&](const ParameterVector<Real>& g) {
    return obj.combine(obj.accept_real(g), obj.accept_generated(g, generated));
  };
  return gradient(loss, gamma, method);
}

}  // namespace qugal

#endif  // QUGAL_CIRCUIT_HPP
