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

// Online matrix multiplicative weights over density matrices (QMMW).
//
// Generator and discriminator both hold Gibbs states of a running sum of
// loss operators:
//
//   sigma_G(t)   = Gibbs( s_G * eps * sum_{tau<=t} sigma_D(tau) )
//   sigma_D(t+1) = Gibbs( s_D * eps * sum_{tau<=t} (rho - sigma_G(tau)) )
//
// with sigma_D(1) = I / 2^N. The printed update uses s_G = s_D = -1; the
// signs are configurable (see README, "Sign resolution").

#ifndef QUGAL_QMMW_HPP
#define QUGAL_QMMW_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qugal/linalg.hpp"

namespace qugal {

enum class EpsilonRule {
  sqrt_n_over_t,        // eps = sqrt(N/T)
  twice_sqrt_n_over_t,  // eps = 2 sqrt(N/T), the value used in the regret proof
  fixed,
};

struct QmmwConfig {
  int n_qubits = 1;
  int rounds = 1;
  EpsilonRule epsilon_rule = EpsilonRule::sqrt_n_over_t;
  double epsilon = 0.0;  // used when epsilon_rule == fixed
  int generator_sign = -1;
  int discriminator_sign = -1;
  int record_interval = 1;
  // Keep every iterate and report regret rates in the trace.
  bool audit = false;
  FidelityConvention fidelity_convention = FidelityConvention::squared;
};

/// Resolved step size; throws ConfigError when the automatic rule exceeds 1/2.
double resolve_epsilon(const QmmwConfig& config);

void validate(const QmmwConfig& config);

/// 3 sqrt(N/T)
double theorem1_bound(int n_qubits, int rounds);

/// (eps^2 T + N) / (2 eps T)
double generator_regret_bound(double epsilon, int n_qubits, int rounds);

/// (eps^2 T + N + 1) / (2 eps T)
double discriminator_regret_bound(double epsilon, int n_qubits, int rounds);

template <typename Real = double>
struct QmmwState {
  int round = 0;
  HermitianAccumulator<Real> disc_exponent_sum;  // sum sigma_D
  HermitianAccumulator<Real> gen_exponent_sum;   // sum (rho - sigma_G)
  HermitianAccumulator<Real> gen_running_sum;    // sum sigma_G
  HermitianAccumulator<Real> disc_running_sum;   // sum sigma_D, for averaging

  explicit QmmwState(Eigen::Index dim)
      : disc_exponent_sum(dim), gen_exponent_sum(dim), gen_running_sum(dim), disc_running_sum(dim) {}
};

/// 1/2 (Tr(sigma_D rho) - Tr(sigma_D sigma_G)) + 1/2
template <typename Real>
Real qmmw_loss(const DensityMatrix<Real>& sigma_g, const DensityMatrix<Real>& sigma_d,
               const DensityMatrix<Real>& rho) {
  if (sigma_g.dim() != sigma_d.dim() || sigma_d.dim() != rho.dim()) {
    throw DimensionError("qmmw_loss: dimension mismatch");
  }
  const Real v = Real(0.5) * (trace_inner(sigma_d.matrix(), rho.matrix()) -
                              trace_inner(sigma_d.matrix(), sigma_g.matrix())) +
                 Real(0.5);
  return std::clamp(v, Real(0), Real(1));
}

template <typename Real>
DensityMatrix<Real> update_generator(const QmmwState<Real>& state, const QmmwConfig& config) {
  const Real scale = Real(config.generator_sign) * Real(resolve_epsilon(config));
  return gibbs_normalize(scale * state.disc_exponent_sum.sum());
}

template <typename Real>
DensityMatrix<Real> update_discriminator(const QmmwState<Real>& state,
                                         const DensityMatrix<Real>& rho,
                                         const QmmwConfig& config) {
  if (rho.dim() != state.gen_exponent_sum.dim()) {
    throw DimensionError("update_discriminator: target dimension mismatch");
  }
  const Real scale = Real(config.discriminator_sign) * Real(resolve_epsilon(config));
  return gibbs_normalize(scale * state.gen_exponent_sum.sum());
}

struct TraceRow {
  int round = 0;
  double loss = 0.0;
  double fidelity = 0.0;
  std::optional<double> gen_regret_rate;
  std::optional<double> disc_regret_rate;
};

struct TrainingTrace {
  std::vector<TraceRow> rows;
  double final_loss = 0.0;
  double final_fidelity = 0.0;
};

template <typename Real = double>
struct QmmwRound {
  DensityMatrix<Real> sigma_g;
  DensityMatrix<Real> sigma_d;
};

template <typename Real = double>
struct QmmwResult {
  TrainingTrace trace;
  DensityMatrix<Real> sigma_g_bar;
  DensityMatrix<Real> sigma_d_bar;
  std::vector<QmmwRound<Real>> history;  // filled when config.audit
  double epsilon = 0.0;
  double generator_regret_rate = 0.0;
  double discriminator_regret_rate = 0.0;
};

/// Applied to every generator iterate before it is used.
template <typename Real>
using GeneratorConstraint = std::function<DensityMatrix<Real>(const DensityMatrix<Real>&)>;

// Regret of the generator against the best fixed state, computed from the
// running sums: min_sigma sum_t L(sigma, sigma_D(t)) is attained at the top
// eigenvector of sum_t sigma_D(t).
template <typename Real>
Real regret_from_sums_generator(const CMatrix<Real>& disc_sum, const CMatrix<Real>& rho,
                                Real loss_sum, int rounds) {
  const auto best = extreme_eig_projector(disc_sum, Extreme::max);
  const Real best_sum = Real(0.5) * (trace_inner(disc_sum, rho) -
                                     trace_inner(disc_sum, best.matrix())) +
                        Real(0.5) * Real(rounds);
  return -loss_sum + best_sum;
}

template <typename Real>
Real regret_from_sums_discriminator(const CMatrix<Real>& gap_sum, Real loss_sum, int rounds) {
  const auto best = extreme_eig_projector(gap_sum, Extreme::min);
  const Real best_sum = Real(0.5) * trace_inner(best.matrix(), gap_sum) + Real(0.5) * Real(rounds);
  return loss_sum - best_sum;
}

template <typename Real>
QmmwResult<Real> run_qmmw(const DensityMatrix<Real>& rho, const QmmwConfig& config,
                          const GeneratorConstraint<Real>& constraint = {}) {
  validate(config);
  if (rho.n_qubits() != config.n_qubits) {
    throw DimensionError("run_qmmw: target has " + std::to_string(rho.n_qubits()) +
                         " qubits, config expects " + std::to_string(config.n_qubits));
  }
  const double eps = resolve_epsilon(config);
  const Eigen::Index dim = rho.dim();
  QmmwState<Real> state(dim);
  auto sigma_d = DensityMatrix<Real>::maximally_mixed(config.n_qubits);

  QmmwResult<Real> result{{}, sigma_d, sigma_d, {}, eps, 0.0, 0.0};
  Real loss_sum = 0;
  for (int t = 1; t <= config.rounds; ++t) {
    state.disc_exponent_sum.add(sigma_d.matrix());
    auto sigma_g = update_generator(state, config);
    if (constraint) sigma_g = constraint(sigma_g);

    const Real loss = qmmw_loss(sigma_g, sigma_d, rho);
    loss_sum += loss;
    state.gen_running_sum.add(sigma_g.matrix());
    state.disc_running_sum.add(sigma_d.matrix());
    state.gen_exponent_sum.add(rho.matrix() - sigma_g.matrix());
    state.round = t;
    if (config.audit) result.history.push_back({sigma_g, sigma_d});

    if (t % config.record_interval == 0 || t == config.rounds) {
      TraceRow row;
      row.round = t;
      row.loss = double(loss);
      const auto avg = DensityMatrix<Real>::trusted(state.gen_running_sum.sum() / Real(t));
      row.fidelity = double(fidelity(avg, rho, config.fidelity_convention));
      if (config.audit) {
        row.gen_regret_rate = double(regret_from_sums_generator(
                                  state.disc_running_sum.sum(), rho.matrix(), loss_sum, t)) /
                              t;
        row.disc_regret_rate =
            double(regret_from_sums_discriminator(state.gen_exponent_sum.sum(), loss_sum, t)) / t;
      }
      result.trace.rows.push_back(row);
    }

    sigma_d = update_discriminator(state, rho, config);
  }

  const Real inv_t = Real(1) / Real(config.rounds);
  result.sigma_g_bar = DensityMatrix<Real>::trusted(state.gen_running_sum.sum() * inv_t);
  result.sigma_d_bar = DensityMatrix<Real>::trusted(state.disc_running_sum.sum() * inv_t);
  result.trace.final_loss = double(qmmw_loss(result.sigma_g_bar, result.sigma_d_bar, rho));
  result.trace.final_fidelity =
      double(fidelity(result.sigma_g_bar, rho, config.fidelity_convention));
  result.generator_regret_rate =
      double(regret_from_sums_generator(state.disc_running_sum.sum(), rho.matrix(), loss_sum,
                                        config.rounds)) /
      config.rounds;
  result.discriminator_regret_rate =
      double(regret_from_sums_discriminator(state.gen_exponent_sum.sum(), loss_sum,
                                            config.rounds)) /
      config.rounds;
  return result;
}

/// R_T(sigma_G) = -sum_t L(sigma_G(t), sigma_D(t)) + min_sigma sum_t L(sigma, sigma_D(t))
template <typename Real>
Real empirical_generator_regret(const std::vector<QmmwRound<Real>>& history,
                                const DensityMatrix<Real>& rho) {
  if (history.empty()) throw ConfigError("empirical_generator_regret: empty history");
  CMatrix<Real> disc_sum = CMatrix<Real>::Zero(rho.dim(), rho.dim());
  for (const auto& r : history) disc_sum += r.sigma_d.matrix();
  const auto best = extreme_eig_projector(disc_sum, Extreme::max);
  Real played = 0, fixed = 0;
  for (const auto& r : history) {
    played += qmmw_loss(r.sigma_g, r.sigma_d, rho);
    fixed += qmmw_loss(best, r.sigma_d, rho);
  }
  return fixed - played;
}

/// R_T(sigma_D) = sum_t L(sigma_G(t), sigma_D(t)) - min_sigma sum_t L(sigma_G(t), sigma)
template <typename Real>
Real empirical_discriminator_regret(const std::vector<QmmwRound<Real>>& history,
                                    const DensityMatrix<Real>& rho) {
  if (history.empty()) throw ConfigError("empirical_discriminator_regret: empty history");
  CMatrix<Real> gap_sum = CMatrix<Real>::Zero(rho.dim(), rho.dim());
  for (const auto& r : history) gap_sum += rho.matrix() - r.sigma_g.matrix();
  const auto best = extreme_eig_projector(gap_sum, Extreme::min);
  Real played = 0, fixed = 0;
  for (const auto& r : history) {
    played += qmmw_loss(r.sigma_g, r.sigma_d, rho);
    fixed += qmmw_loss(r.sigma_g, best, rho);
  }
  return played - fixed;
}

}  // namespace qugal

#endif  // QUGAL_QMMW_HPP
