// Copyright 2026 The qhomog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Partial-SWAP collision dynamics of the quantum homogenizer.
//
// An input qubit collides in turn with reservoir qubits 1..N, each initially
// in the canonical state xi. A collision at coupling angle theta applies
//
//   U(theta) = cos(theta) I + i sin(theta) SWAP = exp(i theta SWAP),
//
// which is the identity at theta = 0 and SWAP (times i) at theta = pi/2.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qhomog/qstate.hpp"

namespace qhomog {

inline ComplexMatrix swap_operator() {
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

inline ComplexMatrix partial_swap_unitary(double theta) {
  if (!std::isfinite(theta)) throw DomainError("partial_swap_unitary: theta must be finite");
  return std::cos(theta) * ComplexMatrix::Identity(4, 4) + kI * std::sin(theta) * swap_operator();
}

// Coupling angle per collision: fixed, or i.i.d. uniform on [lo, hi].
class CouplingSchedule {
 public:
  enum class Mode { Fixed, UniformRandom };

  static constexpr double kDefaultMin = std::numbers::pi / 8.0;
  static constexpr double kDefaultMax = 3.0 * std::numbers::pi / 8.0;

  static CouplingSchedule fixed(double theta) {
    if (!std::isfinite(theta)) throw ConfigError("fixed coupling angle must be finite");
    CouplingSchedule s;
    s.mode_ = Mode::Fixed;
    s.theta_ = theta;
    return s;
  }

  static CouplingSchedule uniform(double theta_min, double theta_max, std::uint64_t seed) {
    if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || theta_min < 0.0 || theta_min > theta_max)
      throw ConfigError("random coupling range must satisfy 0 <= theta_min <= theta_max");
    CouplingSchedule s;
    s.mode_ = Mode::UniformRandom;
    s.lo_ = theta_min;
    s.hi_ = theta_max;
    s.seed_ = seed;
    return s;
  }

  static CouplingSchedule uniform(std::uint64_t seed) { return uniform(kDefaultMin, kDefaultMax, seed); }

  // Angle of collision k (1-based). Depends only on (seed, k).
  double sample(std::size_t k) const {
    if (mode_ == Mode::Fixed) return theta_;
    Rng rng(seed_, {0xc0u, static_cast<std::uint64_t>(k)});
    return rng.uniform(lo_, hi_);
  }

  Mode mode() const { return mode_; }
  double theta_fixed() const { return theta_; }
  double theta_min() const { return mode_ == Mode::Fixed ? theta_ : lo_; }
  double theta_max() const { return mode_ == Mode::Fixed ? theta_ : hi_; }
  std::uint64_t seed() const { return seed_; }

 private:
  CouplingSchedule() = default;

  Mode mode_ = Mode::Fixed;
  double theta_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::uint64_t seed_ = 0;
};

enum class EvolutionMode {
  ExactJoint,  // full (N+1)-qubit density matrix
  MeanField,   // single-qubit marginals through the closed-form channel
};

struct HomogenizerConfig {
  std::size_t n_reservoir = 5;
  DensityMatrix xi = states::plus();
  CouplingSchedule schedule = CouplingSchedule::fixed(std::numbers::pi / 4.0);
  EvolutionMode mode = EvolutionMode::ExactJoint;
  std::size_t max_joint_qubits = 12;
  FidelityKind fidelity_kind = FidelityKind::Uhlmann;

  void validate() const {
    if (n_reservoir < 1) throw ConfigError("n_reservoir must be at least 1");
    if (xi.dim() != 2) throw ConfigError("reservoir state xi must be a single-qubit state");
    if (auto why = xi.violation()) throw ConfigError("reservoir state xi is invalid: " + *why);
    if (mode == EvolutionMode::ExactJoint && n_reservoir + 1 > max_joint_qubits)
      throw ConfigError("exact-joint mode needs " + std::to_string(n_reservoir + 1) + " qubits, cap is " +
                        std::to_string(max_joint_qubits));
  }
};

struct CollisionOutput {
  DensityMatrix input;
  DensityMatrix reservoir;
};

// Marginals of U(theta) (rho (x) xi) U(theta)^dagger in closed form:
//   rho' = cos^2 rho + sin^2 xi - i sin cos [rho, xi]
//   xi'  = cos^2 xi + sin^2 rho - i sin cos [xi, rho]
inline CollisionOutput collision_channel_closed_form(const DensityMatrix& rho, const DensityMatrix& xi, double theta) {
  if (rho.dim() != 2 || xi.dim() != 2) throw DimensionError("collision channel acts on single-qubit states");
  if (!std::isfinite(theta)) throw DomainError("collision channel: theta must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const ComplexMatrix& r = rho.matrix();
  const ComplexMatrix& x = xi.matrix();
  const ComplexMatrix comm = r * x - x * r;
  ComplexMatrix r_out = c * c * r + s * s * x - kI * s * c * comm;
  ComplexMatrix x_out = c * c * x + s * s * r + kI * s * c * comm;
  CollisionOutput out{DensityMatrix::unchecked(std::move(r_out)), DensityMatrix::unchecked(std::move(x_out))};
  out.input.validate();
  out.reservoir.validate();
  return out;
}

// rho <- G rho G^dagger for a 4x4 gate G on (wire_a, wire_b) of an n-qubit
// register; wire_a is the more significant qubit in G's local basis.
inline void apply_two_qubit_gate(ComplexMatrix& rho, std::size_t n_qubits, std::size_t wire_a, std::size_t wire_b,
                                 const ComplexMatrix& gate) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (static_cast<std::size_t>(rho.rows()) != dim || rho.rows() != rho.cols())
    throw DimensionError("apply_two_qubit_gate: state is not " + std::to_string(n_qubits) + "-qubit");
  if (wire_a >= n_qubits || wire_b >= n_qubits || wire_a == wire_b)
    throw DimensionError("apply_two_qubit_gate: wires must be distinct and in range");
  if (gate.rows() != 4 || gate.cols() != 4) throw DimensionError("apply_two_qubit_gate: gate must be 4x4");

  const std::size_t bit_a = std::size_t{1} << (n_qubits - 1 - wire_a);
  const std::size_t bit_b = std::size_t{1} << (n_qubits - 1 - wire_b);
  std::vector<std::array<Eigen::Index, 4>> groups;
  groups.reserve(dim / 4);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & (bit_a | bit_b)) continue;
    groups.push_back({static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(base | bit_b),
                      static_cast<Eigen::Index>(base | bit_a), static_cast<Eigen::Index>(base | bit_a | bit_b)});
  }
  const Eigen::Matrix4cd g = gate;
  const auto d = static_cast<Eigen::Index>(dim);

  // Column-major storage: only left multiplication walks memory well, so
  // G rho G^dagger is computed as (G (G rho)^dagger)^dagger.
  auto left = [&](ComplexMatrix& m) {
    for (Eigen::Index col = 0; col < d; ++col) {
      Complex* c = m.col(col).data();
      for (const auto& idx : groups) {
        const Eigen::Vector4cd v{c[idx[0]], c[idx[1]], c[idx[2]], c[idx[3]]};
        const Eigen::Vector4cd w = g * v;
        for (int l = 0; l < 4; ++l) c[idx[l]] = w(l);
      }
    }
  };
  left(rho);
  rho.adjointInPlace();
  left(rho);
  rho.adjointInPlace();
}

// One partial-SWAP collision embedded on two wires of a joint register.
inline DensityMatrix collide_joint(const DensityMatrix& joint, std::size_t input_wire, std::size_t reservoir_wire,
                                   double theta, std::size_t max_joint_qubits = 12) {
  const std::size_t n = joint.qubits();
  if (n > max_joint_qubits)
    throw DimensionError("collide_joint: " + std::to_string(n) + " qubits exceeds cap " + std::to_string(max_joint_qubits));
  if (input_wire >= n || reservoir_wire >= n || input_wire == reservoir_wire)
    throw DimensionError("collide_joint: wires must be distinct and in range");
  ComplexMatrix m = joint.matrix();
  apply_two_qubit_gate(m, n, input_wire, reservoir_wire, partial_swap_unitary(theta));
  if (std::abs(m.trace() - joint.matrix().trace()) > 1e-10) throw InvariantError("collide_joint: trace not preserved");
  return DensityMatrix::unchecked(std::move(m));
}

struct StepRecord {
  std::size_t step = 0;
  DensityMatrix input;      // input-qubit marginal after collision `step`
  DensityMatrix reservoir;  // marginal of the reservoir qubit just collided (xi at step 0)
  double theta = 0.0;       // 0 at step 0, where no collision has happened
  double distance = 0.0;    // || xi^(0) - input ||_2
  double fidelity = 0.0;    // F(input, xi^(0))
};

struct Trajectory {
  std::vector<StepRecord> steps;

  std::size_t size() const { return steps.size(); }
  const StepRecord& operator[](std::size_t k) const { return steps[k]; }

  std::vector<double> distances() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.distance);
    return out;
  }

  std::vector<double> fidelities() const {
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.fidelity);
    return out;
  }

  std::vector<DensityMatrix> input_states() const {
    std::vector<DensityMatrix> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.input);
    return out;
  }
};

namespace detail {

inline StepRecord make_record(std::size_t k, DensityMatrix input, DensityMatrix reservoir, double theta,
                              const HomogenizerConfig& cfg) {
  input.validate();
  reservoir.validate();
  const double d = l2_distance(cfg.xi, input);
  const double f = fidelity(input, cfg.xi, cfg.fidelity_kind);
  return StepRecord{k, std::move(input), std::move(reservoir), theta, d, f};
}

}  // namespace detail

// Sequential collisions of rho0 with reservoir qubits 1..N in that order.
inline Trajectory run_homogenization(const DensityMatrix& rho0, const HomogenizerConfig& cfg) {
  cfg.validate();
  if (rho0.dim() != 2) throw DimensionError("run_homogenization: input must be a single-qubit state");
  if (auto why = rho0.violation()) throw DomainError("run_homogenization: invalid input state: " + *why);

  Trajectory traj;
  traj.steps.reserve(cfg.n_reservoir + 1);
  traj.steps.push_back(detail::make_record(0, rho0, cfg.xi, 0.0, cfg));

  if (cfg.mode == EvolutionMode::MeanField) {
    DensityMatrix rho = rho0;
    for (std::size_t k = 1; k <= cfg.n_reservoir; ++k) {
      const double theta = cfg.schedule.sample(k);
      auto out = collision_channel_closed_form(rho, cfg.xi, theta);
      rho = out.input;
      traj.steps.push_back(detail::make_record(k, std::move(out.input), std::move(out.reservoir), theta, cfg));
    }
    return traj;
  }

  const std::size_t n = cfg.n_reservoir + 1;
  ComplexMatrix joint = kron(rho0.matrix(), states::tensor_power(cfg.xi, cfg.n_reservoir).matrix());
  for (std::size_t k = 1; k <= cfg.n_reservoir; ++k) {
    const double theta = cfg.schedule.sample(k);
    apply_two_qubit_gate(joint, n, 0, k, partial_swap_unitary(theta));
    if (std::abs(joint.trace() - Complex{1.0, 0.0}) > 1e-10) throw InvariantError("joint evolution lost trace");
    traj.steps.push_back(detail::make_record(k, DensityMatrix::unchecked(qubit_marginal(joint, n, 0)),
                                             DensityMatrix::unchecked(qubit_marginal(joint, n, k)), theta, cfg));
  }
  return traj;
}

// Input marginal of p * (identity channel) + (1 - p) * (SWAP channel).
inline DensityMatrix stochastic_swap_channel(const DensityMatrix& rho, const DensityMatrix& xi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("stochastic_swap_channel: p must lie in [0, 1]");
  if (rho.dim() != xi.dim()) throw DimensionError("stochastic_swap_channel: dimension mismatch");
  return DensityMatrix::unchecked(p * rho.matrix() + (1.0 - p) * xi.matrix());
}

// Arithmetic mean of a non-empty sequence of equal-dimension states.
inline DensityMatrix average_state(std::span<const DensityMatrix> states) {
  if (states.empty()) throw DomainError("average_state: empty input");
  ComplexMatrix acc = states.front().matrix();
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i].dim() != states.front().dim()) throw DimensionError("average_state: dimension mismatch");
    acc += states[i].matrix();
  }
  acc /= static_cast<double>(states.size());
  return DensityMatrix::unchecked(std::move(acc));
}

}  // namespace qhomog
