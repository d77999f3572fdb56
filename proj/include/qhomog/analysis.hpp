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

// Executable checks of contractivity and asymptotic stability of the
// homogenizer, plus the convergence diagnostics built on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qhomog/homogenizer.hpp"
#include "qhomog/parallel.hpp"

namespace qhomog::analysis {

// d_k = || xi^(0) - rho^(k) ||_2 along one trajectory.
struct ContractionReport {
  std::vector<double> d_sequence;
  bool monotone = true;
  double max_violation = 0.0;  // max_k max(d_k - d_{k-1}, 0)
  double final_distance = 0.0;
};

inline ContractionReport contraction_report(std::vector<double> d, double tol = 1e-12) {
  ContractionReport rep;
  for (std::size_t k = 1; k < d.size(); ++k) rep.max_violation = std::max(rep.max_violation, d[k] - d[k - 1]);
  rep.monotone = rep.max_violation <= tol;
  rep.final_distance = d.empty() ? 0.0 : d.back();
  rep.d_sequence = std::move(d);
  return rep;
}

inline ContractionReport check_contractivity(const DensityMatrix& rho0, const HomogenizerConfig& cfg, double tol = 1e-12) {
  return contraction_report(run_homogenization(rho0, cfg).distances(), tol);
}

struct StabilityReport {
  std::vector<double> pairwise_distance;  // || rho_a^(k) - rho_b^(k) ||_2
  std::optional<std::size_t> washout_step;  // first k with distance < epsilon
  double epsilon = 1e-3;
  bool non_increasing = true;
  double max_increase = 0.0;
};

inline bool same_dynamics(const HomogenizerConfig& a, const HomogenizerConfig& b) {
  const auto& sa = a.schedule;
  const auto& sb = b.schedule;
  return a.n_reservoir == b.n_reservoir && a.mode == b.mode && approx_equal(a.xi.matrix(), b.xi.matrix(), 0.0) &&
         sa.mode() == sb.mode() && sa.theta_min() == sb.theta_min() && sa.theta_max() == sb.theta_max() &&
         (sa.mode() == CouplingSchedule::Mode::Fixed || sa.seed() == sb.seed());
}

// Evolves two initial states under identical collision sequences.
inline StabilityReport check_stability(const DensityMatrix& rho_a, const HomogenizerConfig& cfg_a, const DensityMatrix& rho_b,
                                       const HomogenizerConfig& cfg_b, double epsilon = 1e-3, double tol = 1e-12) {
  if (!same_dynamics(cfg_a, cfg_b)) throw ConfigError("check_stability: both runs must share one configuration and schedule");
  if (!(epsilon > 0.0)) throw DomainError("check_stability: epsilon must be positive");
  const auto ta = run_homogenization(rho_a, cfg_a);
  const auto tb = run_homogenization(rho_b, cfg_b);
  StabilityReport rep;
  rep.epsilon = epsilon;
  for (std::size_t k = 0; k < ta.size(); ++k) {
    const double d = l2_distance(ta[k].input, tb[k].input);
    if (k > 0) rep.max_increase = std::max(rep.max_increase, d - rep.pairwise_distance.back());
    rep.pairwise_distance.push_back(d);
    if (!rep.washout_step && d < epsilon) rep.washout_step = k;
  }
  rep.non_increasing = rep.max_increase <= tol;
  return rep;
}

inline StabilityReport check_stability(const DensityMatrix& rho_a, const DensityMatrix& rho_b, const HomogenizerConfig& cfg,
                                       double epsilon = 1e-3, double tol = 1e-12) {
  return check_stability(rho_a, cfg, rho_b, cfg, epsilon, tol);
}

// f_k = F(rho^(k), xi^(0)) for k = 0..N.
inline std::vector<double> convergence_curve(const DensityMatrix& rho0, const HomogenizerConfig& cfg) {
  return run_homogenization(rho0, cfg).fidelities();
}

// || Sigma_N - xi ||_2 for N = 1..n_max, where Sigma_N is the mean of the
// states rho^(1..N) left by the first N collisions.
inline std::vector<double> average_state_convergence(const DensityMatrix& rho0, HomogenizerConfig cfg, std::size_t n_max) {
  if (n_max < 1) throw DomainError("average_state_convergence: n_max must be at least 1");
  cfg.n_reservoir = n_max;
  const auto traj = run_homogenization(rho0, cfg);
  std::vector<double> out;
  out.reserve(n_max);
  ComplexMatrix running = ComplexMatrix::Zero(2, 2);
  for (std::size_t n = 1; n <= n_max; ++n) {
    running += traj[n].input.matrix();
    out.push_back(l2_distance(ComplexMatrix(running / static_cast<double>(n)), cfg.xi.matrix()));
  }
  return out;
}

// Randomized surrogate for the supremum over inputs: random (rho0, xi) pairs
// and uniform random schedules, one derived seed per point.
struct SweepSpec {
  std::size_t points = 1000;
  std::size_t n_reservoir = 30;
  double theta_min = CouplingSchedule::kDefaultMin;
  double theta_max = CouplingSchedule::kDefaultMax;
  EvolutionMode mode = EvolutionMode::MeanField;
  std::size_t max_joint_qubits = 12;
  std::uint64_t root_seed = 0;
  double tol = 1e-12;
};

struct SweepPoint {
  std::uint64_t seed = 0;
  ContractionReport report;
};

inline std::uint64_t derived_seed(std::uint64_t root, std::size_t index) { return Rng::mix(root ^ Rng::mix(index)); }

inline SweepPoint sweep_point(const SweepSpec& spec, std::size_t i) {
  const std::uint64_t seed = derived_seed(spec.root_seed, i);
  HomogenizerConfig cfg;
  cfg.n_reservoir = spec.n_reservoir;
  cfg.xi = random_density(2, seed ^ 0x1ULL);
  cfg.schedule = CouplingSchedule::uniform(spec.theta_min, spec.theta_max, seed);
  cfg.mode = spec.mode;
  cfg.max_joint_qubits = spec.max_joint_qubits;
  return {seed, check_contractivity(random_density(2, seed ^ 0x2ULL), cfg, spec.tol)};
}

inline std::vector<SweepPoint> contractivity_sweep(const SweepSpec& spec, std::size_t workers = 1) {
  return parallel_map(spec.points, workers, [&spec](std::size_t i) { return sweep_point(spec, i); });
}

}  // namespace qhomog::analysis
