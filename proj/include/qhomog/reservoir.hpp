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

// Reservoir computing on top of the homogenizer: inputs are injected as fresh
// qubits that sweep once across a persistent N-qubit reservoir, Pauli
// expectations of the reservoir form the feature vector, and a ridge readout
// maps features to targets.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qhomog/homogenizer.hpp"
#include "qhomog/rng.hpp"

namespace qhomog::reservoir {

// rho(s) = (1 - s)|0><0| + s|1><1|
inline DensityMatrix encode_input(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("encode_input: s must lie in [0, 1], got " + std::to_string(s));
  return DensityMatrix(Eigen::Matrix2cd{{1.0 - s, 0.0}, {0.0, s}});
}

inline void check_inputs(std::span<const double> inputs) {
  for (std::size_t k = 0; k < inputs.size(); ++k)
    if (!(inputs[k] >= 0.0 && inputs[k] <= 1.0))
      throw DomainError("input sequence value at index " + std::to_string(k) + " is outside [0, 1]");
}

// A Pauli string on the reservoir, written as factors like "Z0Z1" or "X2".
// Qubit indices count reservoir qubits from 0 (wire 0 is most significant).
struct PauliObservable {
  std::string label;
  std::uint64_t x_mask = 0;  // qubits carrying X or Y
  std::uint64_t z_mask = 0;  // qubits carrying Z or Y
  int y_count = 0;
};

inline PauliObservable parse_observable(std::string_view label, std::size_t n_qubits) {
  PauliObservable p;
  p.label = std::string(label);
  std::size_t i = 0;
  std::uint64_t seen = 0;
  if (label.empty()) throw ConfigError("empty observable label");
  while (i < label.size()) {
    const char op = label[i];
    if (op != 'I' && op != 'X' && op != 'Y' && op != 'Z')
      throw ConfigError("observable '" + p.label + "': expected I, X, Y or Z at position " + std::to_string(i));
    std::size_t j = i + 1;
    std::size_t q = 0;
    while (j < label.size() && std::isdigit(static_cast<unsigned char>(label[j]))) q = q * 10 + static_cast<std::size_t>(label[j++] - '0');
    if (j == i + 1) throw ConfigError("observable '" + p.label + "': missing qubit index at position " + std::to_string(j));
    if (q >= n_qubits) throw ConfigError("observable '" + p.label + "': qubit " + std::to_string(q) + " out of range");
    const std::uint64_t bit = std::uint64_t{1} << (n_qubits - 1 - q);
    if (seen & bit) throw ConfigError("observable '" + p.label + "': qubit " + std::to_string(q) + " repeated");
    seen |= bit;
    if (op == 'X' || op == 'Y') p.x_mask |= bit;
    if (op == 'Z' || op == 'Y') p.z_mask |= bit;
    if (op == 'Y') ++p.y_count;
    i = j;
  }
  return p;
}

// Z on every qubit, then ZZ on neighbouring pairs.
inline std::vector<std::string> default_observables(std::size_t n_qubits) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n_qubits; ++j) out.push_back("Z" + std::to_string(j));
  for (std::size_t j = 0; j + 1 < n_qubits; ++j) out.push_back("Z" + std::to_string(j) + "Z" + std::to_string(j + 1));
  return out;
}

// tr(P rho). P|j> = phase(j)|j ^ x>, so tr(P rho) = sum_j phase(j) rho(j, j ^ x).
inline double expectation(const ComplexMatrix& rho, const PauliObservable& p) {
  const auto dim = static_cast<std::uint64_t>(rho.rows());
  static constexpr Complex kYPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^k
  Complex acc = 0.0;
  for (std::uint64_t j = 0; j < dim; ++j) {
    const int sign_flips = std::popcount(j & p.z_mask);
    // Y = iXZ: each Y contributes i, and the Z part the usual sign.
    Complex ph = kYPhase[p.y_count & 3];
    if (sign_flips & 1) ph = -ph;
    acc += ph * rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ p.x_mask));
  }
  return acc.real();
}

// theta_k = theta0 * (a + b * s_k)
struct InputCoupling {
  double theta0 = std::numbers::pi / 4.0;
  double a = 0.5;
  double b = 1.0;

  double theta(double s) const { return theta0 * (a + b * s); }
};

struct DriveOptions {
  std::vector<std::string> observables;  // empty: default_observables(N)
  std::size_t washout = 50;
  bool reuse_reservoir = true;  // false: reset the reservoir before every input
  std::optional<InputCoupling> input_coupling;  // overrides cfg.schedule when set
  std::optional<DensityMatrix> initial_reservoir;  // default xi^(x)N
  std::size_t shots = 0;  // 0: exact expectations
  std::uint64_t shot_seed = 0;
};

struct ReservoirRun {
  std::size_t n_reservoir = 0;
  std::vector<std::string> observables;
  Eigen::MatrixXd features;  // T x M, one row per timestep
  CouplingSchedule schedule = CouplingSchedule::fixed(0.0);
  std::optional<InputCoupling> input_coupling;
  std::size_t washout = 0;
  std::vector<double> inputs;

  std::size_t steps() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t usable_rows() const { return steps() > washout ? steps() - washout : 0; }
  Eigen::MatrixXd post_washout() const {
    return features.bottomRows(static_cast<Eigen::Index>(usable_rows()));
  }
};

namespace detail {

inline double sample_expectation(double exact, std::size_t shots, Rng& rng) {
  const double p_plus = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
  std::size_t plus = 0;
  for (std::size_t i = 0; i < shots; ++i) plus += rng.uniform() < p_plus ? 1 : 0;
  return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

}  // namespace detail

inline ReservoirRun drive(std::span<const double> inputs, const HomogenizerConfig& cfg, const DriveOptions& opt = {}) {
  cfg.validate();
  if (cfg.mode != EvolutionMode::ExactJoint) throw ConfigError("drive: the reservoir needs exact-joint mode");
  check_inputs(inputs);
  const std::size_t n = cfg.n_reservoir;
  const std::size_t total = n + 1;

  ReservoirRun run;
  run.n_reservoir = n;
  run.observables = opt.observables.empty() ? default_observables(n) : opt.observables;
  run.schedule = cfg.schedule;
  run.input_coupling = opt.input_coupling;
  run.washout = opt.washout;
  run.inputs.assign(inputs.begin(), inputs.end());

  std::vector<PauliObservable> obs;
  for (const auto& label : run.observables) obs.push_back(parse_observable(label, n));

  const DensityMatrix initial = opt.initial_reservoir ? *opt.initial_reservoir : states::tensor_power(cfg.xi, n);
  if (initial.dim() != (std::size_t{1} << n))
    throw DimensionError("drive: initial reservoir must be an " + std::to_string(n) + "-qubit state");
  if (auto why = initial.violation()) throw DomainError("drive: invalid initial reservoir: " + *why);

  const std::size_t dim_r = std::size_t{1} << n;
  ComplexMatrix res = initial.matrix();
  run.features.resize(static_cast<Eigen::Index>(inputs.size()), static_cast<Eigen::Index>(obs.size()));

  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!opt.reuse_reservoir) res = initial.matrix();
    ComplexMatrix joint = kron(encode_input(inputs[k]).matrix(), res);
    for (std::size_t j = 1; j <= n; ++j) {
      const double theta =
          opt.input_coupling ? opt.input_coupling->theta(inputs[k]) : cfg.schedule.sample(k * n + (j - 1));
      apply_two_qubit_gate(joint, total, 0, j, partial_swap_unitary(theta));
    }
    res = partial_trace(joint, 2, dim_r, Keep::B);
    // Decaying coherences otherwise sink into subnormal range and slow every later step ~5x.
    res = res.unaryExpr([](const Complex& z) {
      return Complex(std::abs(z.real()) < 1e-150 ? 0.0 : z.real(), std::abs(z.imag()) < 1e-150 ? 0.0 : z.imag());
    });
    if (std::abs(trace(res) - 1.0) > 1e-10) throw InvariantError("drive: reservoir trace drifted at step " + std::to_string(k));

    for (std::size_t m = 0; m < obs.size(); ++m) {
      double e = expectation(res, obs[m]);
      if (std::abs(e) > 1.0 + 1e-10) throw InvariantError("drive: expectation of " + obs[m].label + " left [-1, 1]");
      e = std::clamp(e, -1.0, 1.0);
      if (opt.shots > 0) {
        Rng rng(opt.shot_seed, {0x5407, k, m});
        e = detail::sample_expectation(e, opt.shots, rng);
      }
      run.features(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = e;
    }
  }
  return run;
}

// Weights are [bias, w_1..w_M].
struct ReadoutWeights {
  Eigen::VectorXd weights;
  double ridge_lambda = 0.0;
};

inline Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Ridge regression with an unpenalized bias: solved on centred data, then the
// bias restores the means. lambda = 0 is ordinary least squares and must have
// full column rank.
inline ReadoutWeights fit_ridge(const Eigen::MatrixXd& x, std::span<const double> y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("ridge lambda must be a finite non-negative number");
  if (static_cast<std::size_t>(x.rows()) != y.size())
    throw DimensionError("readout: " + std::to_string(y.size()) + " targets for " + std::to_string(x.rows()) + " rows");
  if (x.rows() == 0) throw DimensionError("readout: no training rows");

  const Eigen::VectorXd yv = to_vector(y);
  const Eigen::RowVectorXd mean_x = x.colwise().mean();
  const double mean_y = yv.mean();
  const Eigen::MatrixXd xc = x.rowwise() - mean_x;
  const Eigen::VectorXd yc = yv.array() - mean_y;

  Eigen::VectorXd w;
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
    qr.setThreshold(1e-12);
    if (qr.rank() < xc.cols())
      throw SingularSystemError("readout: feature matrix is rank deficient (rank " + std::to_string(qr.rank()) + " of " +
                                std::to_string(xc.cols()) + ") and lambda = 0");
    w = qr.solve(yc);
  } else {
    Eigen::MatrixXd gram = xc.transpose() * xc;
    gram.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw SingularSystemError("readout: normal equations failed to factor");
    w = ldlt.solve(xc.transpose() * yc);
  }

  ReadoutWeights out;
  out.ridge_lambda = lambda;
  out.weights.resize(w.size() + 1);
  out.weights(0) = mean_y - mean_x.dot(w);
  out.weights.tail(w.size()) = w;
  if (!out.weights.allFinite()) throw InvariantError("readout: non-finite weights");
  return out;
}

inline Eigen::VectorXd predict(const Eigen::MatrixXd& x, const ReadoutWeights& w) {
  if (x.cols() + 1 != w.weights.size()) throw DimensionError("predict: feature width does not match weights");
  return (x * w.weights.tail(x.cols())).array() + w.weights(0);
}

inline double nmse(const Eigen::VectorXd& predicted, std::span<const double> targets) {
  if (static_cast<std::size_t>(predicted.size()) != targets.size()) throw DimensionError("nmse: length mismatch");
  const Eigen::VectorXd y = to_vector(targets);
  const double var = (y.array() - y.mean()).square().sum();
  if (!(var > 0.0)) throw DomainError("nmse: targets have zero variance");
  return (predicted - y).squaredNorm() / var;
}

// Targets align with post-washout rows.
inline ReadoutWeights train_readout(const ReservoirRun& run, std::span<const double> targets, double lambda) {
  if (targets.size() != run.usable_rows())
    throw DimensionError("train_readout: expected " + std::to_string(run.usable_rows()) + " targets, got " +
                         std::to_string(targets.size()));
  return fit_ridge(run.post_washout(), targets, lambda);
}

inline double evaluate(const ReservoirRun& run, const ReadoutWeights& w, std::span<const double> targets) {
  if (targets.size() != run.usable_rows()) throw DimensionError("evaluate: targets do not match post-washout rows");
  return nmse(predict(run.post_washout(), w), targets);
}

// NARMA task. inputs[k] = u_k, targets[k] = y_{k+1}.
struct NarmaSeries {
  std::vector<double> inputs;
  std::vector<double> targets;
  int order = 2;
  std::uint64_t seed = 0;  // seed actually used
  std::size_t resamples = 0;
};

// Returns y_1..y_T with y_0 = y_{-1} = ... = 0; empty if the run diverges.
inline std::vector<double> narma_recurrence(int order, std::span<const double> u) {
  if (order != 2 && order != 10) throw DomainError("NARMA order must be 2 or 10");
  const std::size_t lag = static_cast<std::size_t>(order);
  std::vector<double> y(u.size() + lag, 0.0);  // y[k + lag - 1] holds y_k, so y_0 sits at lag-1
  auto Y = [&](std::ptrdiff_t k) -> double& { return y[static_cast<std::size_t>(k + static_cast<std::ptrdiff_t>(lag) - 1)]; };
  for (std::size_t k = 0; k < u.size(); ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    double next;
    if (order == 2) {
      next = 0.4 * Y(kk) + 0.4 * Y(kk) * Y(kk - 1) + 0.6 * u[k] * u[k] * u[k] + 0.1;
    } else {
      double sum = 0.0;
      for (std::ptrdiff_t i = 0; i < 10; ++i) sum += Y(kk - i);
      const double u_lag = k >= 9 ? u[k - 9] : 0.0;
      next = 0.3 * Y(kk) + 0.05 * Y(kk) * sum + 1.5 * u_lag * u[k] + 0.1;
    }
    if (!std::isfinite(next) || std::abs(next) > 1e3) return {};
    Y(kk + 1) = next;
  }
  return {y.begin() + static_cast<std::ptrdiff_t>(lag), y.end()};
}

// u_k is uniform on [0, u_max]; the standard task uses 0.5.
inline NarmaSeries narma_series(int order, std::size_t length, std::uint64_t seed, double u_max = 0.5) {
  if (order != 2 && order != 10) throw DomainError("NARMA order must be 2 or 10");
  if (length <= static_cast<std::size_t>(order)) throw DomainError("NARMA length must exceed the order");
  if (!(u_max > 0.0) || !std::isfinite(u_max)) throw DomainError("NARMA input bound must be positive");
  NarmaSeries out;
  out.order = order;
  for (std::size_t attempt = 0; attempt < 1000; ++attempt) {
    const std::uint64_t s = seed + attempt;
    Rng rng(s, {0x4a2a, static_cast<std::uint64_t>(order)});
    std::vector<double> u(length);
    for (auto& v : u) v = rng.uniform(0.0, u_max);
    auto y = narma_recurrence(order, u);
    if (y.empty()) continue;
    out.inputs = std::move(u);
    out.targets = std::move(y);
    out.seed = s;
    out.resamples = attempt;
    return out;
  }
  throw InvariantError("NARMA series diverged for 1000 consecutive seeds");
}

struct QrcOptions {
  int order = 2;
  std::size_t length = 2000;
  std::size_t n_reservoir = 6;
  std::uint64_t seed = 3;
  double lambda = 1e-6;
  std::size_t washout = 50;
  double train_fraction = 0.7;
  double input_scale = 2.0;  // u in [0, 0.5] -> s in [0, 1]
  InputCoupling coupling;
  DensityMatrix xi = states::plus();
  std::vector<std::string> observables;
  bool reuse_reservoir = true;
  std::size_t shots = 0;
};

struct SplitMetrics {
  double train = 0.0;
  double test = 0.0;
};

struct QrcResult {
  NarmaSeries series;
  ReservoirRun run;
  ReadoutWeights weights;
  ReadoutWeights baseline_weights;
  SplitMetrics reservoir_nmse;
  SplitMetrics baseline_nmse;
  std::size_t train_rows = 0;
  std::vector<double> targets;      // post-washout
  Eigen::VectorXd predictions;      // post-washout, train rows first
  Eigen::VectorXd baseline_predictions;
};

inline QrcResult run_narma_benchmark(const QrcOptions& opt) {
  if (!(opt.train_fraction > 0.0 && opt.train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
  if (!(opt.input_scale > 0.0)) throw ConfigError("input scale must be positive");
  QrcResult r;
  r.series = narma_series(opt.order, opt.length, opt.seed);
  if (opt.washout + 4 > opt.length) throw ConfigError("washout leaves too few rows for training and testing");

  std::vector<double> s(opt.length);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = std::min(1.0, opt.input_scale * r.series.inputs[k]);

  HomogenizerConfig cfg;
  cfg.n_reservoir = opt.n_reservoir;
  cfg.xi = opt.xi;
  cfg.mode = EvolutionMode::ExactJoint;
  DriveOptions d;
  d.observables = opt.observables;
  d.washout = opt.washout;
  d.reuse_reservoir = opt.reuse_reservoir;
  d.input_coupling = opt.coupling;
  d.shots = opt.shots;
  d.shot_seed = opt.seed;
  r.run = drive(s, cfg, d);

  const Eigen::MatrixXd x = r.run.post_washout();
  r.targets.assign(r.series.targets.begin() + static_cast<std::ptrdiff_t>(opt.washout), r.series.targets.end());
  const auto rows = static_cast<Eigen::Index>(r.targets.size());
  const auto n_train = static_cast<Eigen::Index>(std::floor(opt.train_fraction * static_cast<double>(rows)));
  if (n_train < 2 || rows - n_train < 2) throw ConfigError("split leaves fewer than two rows on one side");
  r.train_rows = static_cast<std::size_t>(n_train);

  Eigen::MatrixXd u(rows, 1);
  for (Eigen::Index i = 0; i < rows; ++i) u(i, 0) = r.series.inputs[opt.washout + static_cast<std::size_t>(i)];

  const std::span<const double> y(r.targets);
  const auto y_train = y.first(r.train_rows);
  const auto y_test = y.subspan(r.train_rows);

  r.weights = fit_ridge(x.topRows(n_train), y_train, opt.lambda);
  r.predictions = predict(x, r.weights);
  r.reservoir_nmse = {nmse(r.predictions.head(n_train), y_train), nmse(r.predictions.tail(rows - n_train), y_test)};

  r.baseline_weights = fit_ridge(u.topRows(n_train), y_train, opt.lambda);
  r.baseline_predictions = predict(u, r.baseline_weights);
  r.baseline_nmse = {nmse(r.baseline_predictions.head(n_train), y_train),
                     nmse(r.baseline_predictions.tail(rows - n_train), y_test)};
  return r;
}

}  // namespace qhomog::reservoir
