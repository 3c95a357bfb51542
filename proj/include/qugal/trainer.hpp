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

// Adversarial training of the circuit GAN.
//
// mw_train runs K virtual gradient steps per outer round, weights the
// recorded generator gradients by their losses (w_k = eta L_k / sum L) and
// applies the weighted sum to the generator. The discriminator takes one
// plain gradient step evaluated at the outer parameters.

#ifndef QUGAL_TRAINER_HPP
#define QUGAL_TRAINER_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qugal/circuit.hpp"

namespace qugal {

enum class Direction { ascend, descend };

inline double direction_sign(Direction d) { return d == Direction::ascend ? 1.0 : -1.0; }

const char* to_string(Direction d);

struct TrainerConfig {
  int rounds = 500;
  int inner_iterations = 3;
  double learning_rate = 0.4;
  double scale = 0.1;  // eta
  std::uint64_t seed = 1;
  double init_low = 0.0;
  double init_high = 2.0 * std::numbers::pi;
  Direction generator_direction = Direction::ascend;
  Direction discriminator_direction = Direction::descend;
  GradientMethod gradient_method = GradientMethod::parameter_shift;
  // Record the inner losses and weights of every round.
  bool audit = false;
};

void validate(const TrainerConfig& config);

/// w_k = eta L_k / sum_k L_k; uniform eta / K when every loss is zero.
std::vector<double> compute_weights(std::span<const double> inner_losses, double eta);

struct GanRoundRecord {
  int round = 0;
  double loss = 0.0;      // at the outer parameters, before the round's update
  double fidelity = 0.0;  // of the generated state at those parameters
  std::vector<double> inner_losses;
  std::vector<double> weights;
};

struct GanTrainingTrace {
  std::vector<GanRoundRecord> rounds;
  double final_loss = 0.0;
  double final_fidelity = 0.0;
};

template <typename Real = double>
struct GanTrainingResult {
  ParameterVector<Real> theta;
  ParameterVector<Real> gamma;
  GanTrainingTrace trace;
};

/// Uniform draws on [low, high) from the top 53 bits of a 64-bit
/// Mersenne twister, so a seed gives the same angles on every platform.
template <typename Real>
ParameterVector<Real> uniform_parameters(std::mt19937_64& rng, Eigen::Index n, double low,
                                         double high) {
  ParameterVector<Real> p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    p(i) = Real(low + (high - low) * u);
  }
  return p;
}

namespace detail {

template <typename Real>
std::pair<ParameterVector<Real>, ParameterVector<Real>> initial_parameters(
    const GanObjective<Real>& obj, const TrainerConfig& config) {
  std::mt19937_64 rng(config.seed);
  auto theta = uniform_parameters<Real>(rng, obj.generator().n_params, config.init_low, config.init_high);
  auto gamma = uniform_parameters<Real>(rng, obj.discriminator().n_params, config.init_low, config.init_high);
  return {std::move(theta), std::move(gamma)};
}

template <typename Real>
void finish_trace(GanTrainingTrace& trace, const GanObjective<Real>& obj,
                  const ParameterVector<Real>& theta, const ParameterVector<Real>& gamma) {
  trace.final_loss = double(obj.loss(theta, gamma));
  trace.final_fidelity = double(obj.fidelity_to_target(theta));
}

}  // namespace detail

template <typename Real>
GanTrainingResult<Real> mw_train(const GanObjective<Real>& obj, const TrainerConfig& config) {
  validate(config);
  auto [theta, gamma] = detail::initial_parameters(obj, config);
  const Real alpha = Real(config.learning_rate);
  const Real g_sign = Real(direction_sign(config.generator_direction));
  const Real d_sign = Real(direction_sign(config.discriminator_direction));
  const int K = config.inner_iterations;

  GanTrainingTrace trace;
  trace.rounds.reserve(std::size_t(config.rounds));
  std::vector<double> inner_losses(static_cast<std::size_t>(K));
  std::vector<ParameterVector<Real>> inner_grads(static_cast<std::size_t>(K));

  for (int t = 1; t <= config.rounds; ++t) {
    ParameterVector<Real> v_theta = theta, v_gamma = gamma;
    ParameterVector<Real> outer_gamma_grad;
    for (int k = 0; k < K; ++k) {
      inner_losses[std::size_t(k)] = double(obj.loss(v_theta, v_gamma));
      inner_grads[std::size_t(k)] = generator_gradient(obj, v_theta, v_gamma, config.gradient_method);
      // At k = 0 the virtual point is the outer point; its gamma gradient is
      // the one the outer discriminator step uses.
      const bool need_gamma = k == 0 || k + 1 < K;
      ParameterVector<Real> gamma_grad;
      if (need_gamma) gamma_grad = discriminator_gradient(obj, v_theta, v_gamma, config.gradient_method);
      if (k == 0) outer_gamma_grad = gamma_grad;
      if (k + 1 < K) {
        v_theta += g_sign * alpha * inner_grads[std::size_t(k)];
        v_gamma += d_sign * alpha * gamma_grad;
      }
    }

    GanRoundRecord record;
    record.round = t;
    record.loss = inner_losses.front();
    record.fidelity = double(obj.fidelity_to_target(theta));
    const auto weights = compute_weights(inner_losses, config.scale);
    if (config.audit) {
      record.inner_losses = inner_losses;
      record.weights = weights;
    }
    trace.rounds.push_back(std::move(record));

    ParameterVector<Real> step = ParameterVector<Real>::Zero(theta.size());
    for (int k = 0; k < K; ++k) step += Real(weights[std::size_t(k)]) * inner_grads[std::size_t(k)];
    theta += g_sign * alpha * step;
    gamma += d_sign * alpha * outer_gamma_grad;
  }
  detail::finish_trace(trace, obj, theta, gamma);
  return {std::move(theta), std::move(gamma), std::move(trace)};
}

/// Plain simultaneous gradient steps at the current parameters.
template <typename Real>
GanTrainingResult<Real> baseline_train(const GanObjective<Real>& obj, const TrainerConfig& config) {
  validate(config);
  auto [theta, gamma] = detail::initial_parameters(obj, config);
  const Real alpha = Real(config.learning_rate);
  const Real g_sign = Real(direction_sign(config.generator_direction));
  const Real d_sign = Real(direction_sign(config.discriminator_direction));

  GanTrainingTrace trace;
  trace.rounds.reserve(std::size_t(config.rounds));
  for (int t = 1; t <= config.rounds; ++t) {
    GanRoundRecord record;
    record.round = t;
    record.loss = double(obj.loss(theta, gamma));
    record.fidelity = double(obj.fidelity_to_target(theta));
    trace.rounds.push_back(std::move(record));
    const auto g_theta = generator_gradient(obj, theta, gamma, config.gradient_method);
    const auto g_gamma = discriminator_gradient(obj, theta, gamma, config.gradient_method);
    theta += g_sign * alpha * g_theta;
    gamma += d_sign * alpha * g_gamma;
  }
  detail::finish_trace(trace, obj, theta, gamma);
  return {std::move(theta), std::move(gamma), std::move(trace)};
}

}  // namespace qugal

#endif  // QUGAL_TRAINER_HPP
