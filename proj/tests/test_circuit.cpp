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

#include <cmath>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qugal/circuit.hpp"
#include "qugal/qmmw_entanglement.hpp"

using namespace qugal;
using Catch::Approx;
using M = CMatrix<double>;
using V = CVector<double>;
using P = ParameterVector<double>;
using DM = DensityMatrix<double>;

namespace {

CircuitLayout single(GateKind kind, int n = 1, int target = 0) {
  CircuitLayout c;
  c.n_qubits = n;
  c.n_params = 1;
  c.gates = {{kind, target, -1, 0}};
  return c;
}

P angles(std::initializer_list<double> a) {
  P p(Eigen::Index(a.size()));
  Eigen::Index i = 0;
  for (double x : a) p(i++) = x;
  return p;
}

}  // namespace

TEST_CASE("empty circuit is the identity", "[circuit]") {
  CircuitLayout c;
  c.n_qubits = 2;
  std::mt19937_64 rng(51);
  const V v = oracle::random_pure(rng, 4);
  CHECK((apply_circuit(c, P(), PureState<double>(v)).amplitudes() - v).norm() < 1e-15);
}

TEST_CASE("RX(pi) flips with a -i phase", "[circuit]") {
  const auto out = apply_circuit(single(GateKind::RX), angles({std::numbers::pi}), PureState<double>::basis(1, 0));
  CHECK(std::abs(out.amplitudes()(0)) < 1e-15);
  CHECK(std::abs(out.amplitudes()(1) - std::complex<double>(0, -1)) < 1e-15);
}

TEST_CASE("qubit zero is the most significant bit", "[circuit]") {
  const auto out = apply_circuit(single(GateKind::RX, 2, 0), angles({std::numbers::pi}), PureState<double>::basis(2, 0));
  CHECK(std::abs(out.amplitudes()(0b10)) == Approx(1.0));
}

TEST_CASE("random circuits match the dense unitary oracle", "[circuit]") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const auto layout = oracle::random_layout(rng, 3, 20);
    const P p = oracle::random_angles(rng, layout.n_params);
    const V v = oracle::random_pure(rng, 8);
    const V expect = oracle::circuit_matrix(layout, p) * v;
    CHECK((apply_circuit(layout, p, PureState<double>(v)).amplitudes() - expect).norm() < 1e-12);
    CHECK((circuit_unitary(layout, p) - oracle::circuit_matrix(layout, p)).norm() < 1e-12);
  }
}

TEST_CASE("circuits preserve the norm", "[circuit][property]") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    const auto layout = oracle::random_layout(rng, n, 40);
    const P p = oracle::random_angles(rng, layout.n_params);
    CVector<double> v = oracle::random_pure(rng, Eigen::Index(1) << n);
    apply_circuit_inplace(layout, p, v);
    CHECK(std::abs(v.norm() - 1.0) < 1e-10);
  }
}

TEST_CASE("mismatched parameters or widths are rejected", "[circuit]") {
  const auto layout = single(GateKind::RY, 2);
  CHECK_THROWS_AS(apply_circuit(layout, angles({0.1, 0.2}), PureState<double>::basis(2, 0)), DimensionError);
  CHECK_THROWS_AS(apply_circuit(layout, angles({0.1}), PureState<double>::basis(3, 0)), DimensionError);
}

TEST_CASE("generated state without ancilla is the output projector", "[circuit]") {
  std::mt19937_64 rng(54);
  const auto layout = build_generator_layout(2, 0, 2);
  const P p = oracle::random_angles(rng, layout.n_params);
  const V out = zero_state_output(layout, p);
  const auto s = generated_state(layout, p, 2, 0);
  CHECK((s.matrix() - out * out.adjoint()).norm() < 1e-12);
}

TEST_CASE("Bell preparation leaves a maximally mixed data qubit", "[circuit]") {
  CircuitLayout bell;
  bell.n_qubits = 2;
  bell.n_params = 1;
  bell.gates = {{GateKind::RY, 0, -1, 0}, {GateKind::CNOT, 1, 0, -1}};
  const auto s = generated_state(bell, angles({std::numbers::pi / 2}), 1, 1);
  CHECK((s.matrix() - M::Identity(2, 2) / 2.0).norm() < 1e-12);
}

TEST_CASE("generated state with ancillas matches the composed oracle", "[circuit]") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto layout = build_generator_layout(2, 1, 2);
    const P p = oracle::random_angles(rng, layout.n_params);
    const V out = oracle::circuit_matrix(layout, p).col(0);
    const M expect = oracle::partial_trace(out * out.adjoint(), 2, 1, 0);
    CHECK((generated_state(layout, p, 2, 1).matrix() - expect).norm() < 1e-12);
  }
}

TEST_CASE("discriminator acceptance closed forms", "[circuit]") {
  std::mt19937_64 rng(56);
  const DM rho(oracle::random_density(rng, 4));
  CircuitLayout identity;
  identity.n_qubits = 3;
  CHECK(discriminator_accept_prob(identity, P(), rho) == Approx(1.0));
  const auto flip = single(GateKind::RX, 3, 2);
  CHECK(discriminator_accept_prob(flip, angles({std::numbers::pi}), rho) == Approx(0.0).margin(1e-14));
}

TEST_CASE("discriminator acceptance matches the dense oracle", "[circuit]") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 20; ++trial) {
    const auto layout = build_discriminator_layout(2, 2);
    const P g = oracle::random_angles(rng, layout.n_params);
    const M rho = oracle::random_density(rng, 4);
    const double expect = oracle::accept_dense(oracle::circuit_matrix(layout, g), rho);
    CHECK(discriminator_accept_prob(layout, g, DM(rho)) == Approx(expect).margin(1e-12));
  }
}

TEST_CASE("adversarial loss equilibrium slices", "[circuit]") {
  std::mt19937_64 rng(58);
  // the target is the generator's own output, so sigma_G = rho
  const auto gen = build_generator_layout(2, 0, 1);
  const auto disc = build_discriminator_layout(2, 1);
  const P theta = oracle::random_angles(rng, gen.n_params);
  const GanProblem<double> problem{generated_state(gen, theta, 2, 0), 0, 0.5};
  for (int i = 0; i < 10; ++i) {
    const P gamma = oracle::random_angles(rng, disc.n_params);
    CHECK(qugan_loss(gen, theta, disc, gamma, problem) == Approx(0.5).margin(1e-12));
  }
  // an empty discriminator accepts everything: 1/2 * 1 + 1/2 * 0
  CircuitLayout identity;
  identity.n_qubits = 3;
  const GanProblem<double> other{DM(oracle::random_density(rng, 4)), 0, 0.5};
  CHECK(qugan_loss(gen, theta, identity, P(), other) == Approx(0.5).margin(1e-12));
}

TEST_CASE("adversarial loss matches the dense oracle", "[circuit]") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const auto gen = build_generator_layout(2, 1, 1);
    const auto disc = build_discriminator_layout(2, 2);
    const P theta = oracle::random_angles(rng, gen.n_params);
    const P gamma = oracle::random_angles(rng, disc.n_params);
    const M rho = oracle::random_density(rng, 4);
    const double prior = oracle::uniform(rng);
    const V out = oracle::circuit_matrix(gen, theta).col(0);
    const M sigma = oracle::partial_trace(out * out.adjoint(), 2, 1, 0);
    const M ud = oracle::circuit_matrix(disc, gamma);
    const double expect = prior * oracle::accept_dense(ud, rho) + (1 - prior) * (1 - oracle::accept_dense(ud, sigma));
    const GanProblem<double> problem{DM(rho), 1, prior};
    const double l = qugan_loss(gen, theta, disc, gamma, problem);
    CHECK(l == Approx(expect).margin(1e-12));
    CHECK((l >= 0.0 && l <= 1.0));
  }
}

TEST_CASE("objective rejects inconsistent widths", "[circuit]") {
  const GanProblem<double> problem{DM::maximally_mixed(2), 0, 0.5};
  CHECK_THROWS_AS(GanObjective<double>(problem, build_generator_layout(3, 0, 1), build_discriminator_layout(2, 1)),
                  DimensionError);
  CHECK_THROWS_AS(GanObjective<double>(problem, build_generator_layout(2, 0, 1), build_discriminator_layout(3, 1)),
                  DimensionError);
  CHECK_THROWS_AS(GanObjective<double>(GanProblem<double>{DM::maximally_mixed(2), 0, 1.5},
                                       build_generator_layout(2, 0, 1), build_discriminator_layout(2, 1)),
                  ConfigError);
}

TEST_CASE("parameter shift on closed-form losses", "[circuit]") {
  const auto rx = single(GateKind::RX);
  const auto toy = [&](const P& p) { return std::norm(zero_state_output(rx, p)(1)); };  // sin^2(t/2)
  std::mt19937_64 rng(60);
  for (int i = 0; i < 20; ++i) {
    const double t = oracle::uniform(rng, -4.0, 4.0);
    CHECK(toy(angles({t})) == Approx(std::pow(std::sin(t / 2), 2)).margin(1e-14));
    CHECK(parameter_shift_gradient(toy, angles({t}), 0) == Approx(std::sin(t) / 2).margin(1e-14));
  }
  const auto flat = [](const P&) { return 0.25; };
  CHECK(parameter_shift_gradient(flat, angles({0.3, 0.4}), 1) == 0.0);
  CHECK_THROWS_AS(parameter_shift_gradient(flat, angles({0.3}), 1), DimensionError);
}

TEST_CASE("parameter shift agrees with central differences", "[circuit][property]") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto gen = build_generator_layout(2, 0, 1);
    const auto disc = build_discriminator_layout(2, 1);
    const GanObjective<double> obj(GanProblem<double>{DM(oracle::random_density(rng, 4)), 0, 0.5}, gen, disc);
    const P theta = oracle::random_angles(rng, gen.n_params);
    const P gamma = oracle::random_angles(rng, disc.n_params);
    const auto shift = generator_gradient(obj, theta, gamma, GradientMethod::parameter_shift);
    const auto fd = generator_gradient(obj, theta, gamma, GradientMethod::finite_difference);
    CHECK((shift - fd).cwiseAbs().maxCoeff() < 1e-6);
    const auto gshift = discriminator_gradient(obj, theta, gamma, GradientMethod::parameter_shift);
    const auto gfd = discriminator_gradient(obj, theta, gamma, GradientMethod::finite_difference);
    CHECK((gshift - gfd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("generator layout counts", "[circuit]") {
  const auto one = build_generator_layout(1, 0, 1);
  CHECK(one.gates.size() == 3);
  CHECK(one.n_params == 3);
  CHECK(one.cnot_count() == 0);
  const auto two = build_generator_layout(2, 0, 2);
  CHECK(two.gates.size() == 14);
  CHECK(two.n_params == 12);
  CHECK(two.block_boundaries == std::vector<std::size_t>{0, 7});
}

TEST_CASE("restricted generator never crosses the cut", "[circuit]") {
  const auto gen = build_generator_layout(4, 0, 7, BipartiteRestriction{2, 2});
  std::size_t cnots = 0;
  for (const auto& g : gen.gates) {
    if (g.kind != GateKind::CNOT) continue;
    ++cnots;
    CHECK((g.control < 2) == (g.target < 2));
  }
  CHECK(cnots == 14);
  CHECK(gen.n_params == 84);
  CHECK(gen.gates.size() == 98);
  CHECK_THROWS_AS(build_generator_layout(4, 0, 1, BipartiteRestriction{1, 2}), ConfigError);
}

TEST_CASE("restricted generator output is exactly product", "[circuit][property]") {
  std::mt19937_64 rng(62);
  const BipartiteSplit split{2, 2};
  const auto gen = build_generator_layout(4, 0, 3, BipartiteRestriction{2, 2});
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = generated_state(gen, oracle::random_angles(rng, gen.n_params), 4, 0);
    CHECK(std::abs(fidelity(s, constrain_product(s, split)) - 1.0) < 1e-9);
  }
}

TEST_CASE("discriminator layout counts", "[circuit]") {
  const auto one = build_discriminator_layout(1, 1);
  CHECK(one.n_qubits == 2);
  CHECK(one.n_params == 6);
  REQUIRE(one.gates.back().kind == GateKind::CNOT);
  CHECK(one.gates.back().target == 1);
  const auto four = build_discriminator_layout(4, 3);
  CHECK(four.n_qubits == 5);
  CHECK(four.rotation_count() == 45);
  CHECK(four.gates.size() == 57);
}

TEST_CASE("assembled circuits are unitary", "[circuit]") {
  std::mt19937_64 rng(63);
  for (const auto& layout : {build_generator_layout(3, 0, 2), build_discriminator_layout(2, 2)}) {
    const M u = circuit_unitary(layout, oracle::random_angles(rng, layout.n_params));
    CHECK((u.adjoint() * u - M::Identity(u.rows(), u.cols())).norm() < 1e-9);
  }
}

TEST_CASE("layout text round trip", "[circuit]") {
  for (const auto& layout : {build_generator_layout(4, 0, 2, BipartiteRestriction{2, 2}),
                             build_discriminator_layout(3, 3), build_generator_layout(2, 1, 1)}) {
    CHECK(layout_from_text(to_text(layout)) == layout);
  }
  CHECK(to_text(build_generator_layout(1, 0, 1)) == "circuit 1 3\nblock\nRX 0 0\nRY 0 1\nRZ 0 2\n");
}

TEST_CASE("layout text errors carry line numbers", "[circuit]") {
  const auto message = [](const std::string& text) {
    try {
      layout_from_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK_THAT(message("circuit 1 1\nRQ 0 0\n"), Catch::Matchers::ContainsSubstring("line 2"));
  CHECK_THAT(message("circuit 2 0\n# c\nCNOT 0\n"), Catch::Matchers::ContainsSubstring("line 3"));
  CHECK_THAT(message("circuit 1 2\nRX 0 0\n"), Catch::Matchers::ContainsSubstring("parameter 1 used 0"));
  CHECK_THAT(message(""), Catch::Matchers::ContainsSubstring("missing header"));
  CHECK_THAT(message("circuit 2 0\nCNOT 1 1\n"), Catch::Matchers::ContainsSubstring("control equals target"));
}

TEST_CASE("pure components reproduce a mixed state", "[circuit]") {
  std::mt19937_64 rng(64);
  const DM rho(oracle::random_density(rng, 8));
  const auto parts = pure_components(rho);
  M rebuilt = M::Zero(8, 8);
  for (std::size_t i = 0; i < parts.weights.size(); ++i) {
    rebuilt += parts.weights[i] * parts.vectors[i] * parts.vectors[i].adjoint();
  }
  CHECK((rebuilt - rho.matrix()).norm() < 1e-12);
}
