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

// The named experiments. Each run returns its artifacts in memory (CSV text,
// optional SVG, manifest); writing them to disk is a separate step.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qhomog/analysis.hpp"
#include "qhomog/circuit.hpp"
#include "qhomog/cli/config.hpp"
#include "qhomog/io/csv.hpp"
#include "qhomog/io/svg.hpp"
#include "qhomog/reservoir.hpp"

namespace qhomog::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOptions {
  std::size_t threads = 1;  // never changes results
  bool plot = false;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<Artifact> artifacts;
  std::vector<std::string> notes;  // human-readable summary lines

  const Artifact* find(const std::string& name) const {
    for (const auto& a : artifacts)
      if (a.name == name) return &a;
    return nullptr;
  }
};

namespace detail {

using io::format_real;

inline std::string fmt(std::size_t v) { return std::to_string(v); }

inline io::CsvTable table(const ExperimentConfig& cfg, std::string schema, std::vector<std::string> header) {
  io::CsvTable t(std::move(schema), 1, std::move(header));
  t.meta("experiment", cfg.experiment);
  t.meta("seed", cfg.text("seed"));
  t.meta("config_hash", cfg.hash());
  t.meta("version", std::string(kVersion));
  return t;
}

inline EvolutionMode mode_of(const ExperimentConfig& cfg) {
  return cfg.text("mode") == "mean-field" ? EvolutionMode::MeanField : EvolutionMode::ExactJoint;
}

inline HomogenizerConfig homogenizer_config(const ExperimentConfig& cfg, std::optional<double> fixed_theta = {}) {
  HomogenizerConfig h;
  h.n_reservoir = cfg.count("n");
  if (h.n_reservoir < 1) cfg.fail("n", "must be at least 1");
  h.xi = cfg.state("xi");
  h.mode = mode_of(cfg);
  h.max_joint_qubits = cfg.count("max-joint-qubits");
  if (h.mode == EvolutionMode::ExactJoint && h.n_reservoir + 1 > h.max_joint_qubits)
    cfg.fail("n", "exact-joint mode needs N + 1 = " + std::to_string(h.n_reservoir + 1) + " qubits but max-joint-qubits is " +
                      std::to_string(h.max_joint_qubits) + " (use mode = mean-field)");
  if (cfg.has("fidelity"))
    h.fidelity_kind = cfg.text("fidelity") == "overlap" ? FidelityKind::Overlap : FidelityKind::Uhlmann;
  if (fixed_theta) {
    h.schedule = CouplingSchedule::fixed(*fixed_theta);
  } else if (cfg.text("schedule") == "uniform") {
    const auto [lo, hi] = cfg.angle_pair("theta-range");
    try {
      h.schedule = CouplingSchedule::uniform(lo, hi, cfg.seed("seed"));
    } catch (const Error& e) {
      cfg.fail("theta-range", e.what());
    }
  } else {
    h.schedule = CouplingSchedule::fixed(cfg.angle("theta"));
  }
  return h;
}

inline void add_plot(RunResult& r, const RunOptions& opt, const std::string& name, const std::string& title,
                     const std::string& x_label, const std::string& y_label, const std::vector<io::Series>& series) {
  if (opt.plot) r.artifacts.push_back({name, io::line_plot_svg(title, x_label, y_label, series)});
}

inline std::vector<double> steps_axis(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
  return x;
}

inline RunResult run_homogenize(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  const auto h = homogenizer_config(cfg);
  const auto rho0 = cfg.state("rho0");
  const auto traj = run_homogenization(rho0, h);

  auto t = table(cfg, "trajectory", {"step", "theta", "fidelity", "l2_distance", "bloch_x", "bloch_y", "bloch_z"});
  for (const auto& s : traj.steps) {
    const auto b = bloch_vector(s.input.matrix());
    t.row({fmt(s.step), format_real(s.theta), format_real(s.fidelity), format_real(s.distance), format_real(b[0]),
           format_real(b[1]), format_real(b[2])});
  }
  r.artifacts.push_back({"trajectory.csv", t.render()});
  add_plot(r, opt, "trajectory.svg", "homogenization", "collision k", "value",
           {{"fidelity", steps_axis(traj.size()), traj.fidelities()}, {"l2 distance", steps_axis(traj.size()), traj.distances()}});

  if (const std::size_t steps = cfg.count("steps"); steps > 0) {
    // single-pass marginals coincide in both modes; mean-field lifts the qubit cap
    HomogenizerConfig mf = h;
    mf.mode = EvolutionMode::MeanField;
    const auto series = analysis::average_state_convergence(rho0, mf, steps);
    auto m = table(cfg, "mixing", {"n", "average_distance"});
    for (std::size_t i = 0; i < series.size(); ++i) m.row({fmt(i + 1), format_real(series[i])});
    r.artifacts.push_back({"mixing.csv", m.render()});
    r.notes.push_back("average-state distance: N=1 " + format_real(series.front()) + ", N=" + fmt(steps) + " " +
                      format_real(series.back()));
  }
  r.notes.push_back("final fidelity " + format_real(traj.steps.back().fidelity) + ", final l2 distance " +
                    format_real(traj.steps.back().distance));
  return r;
}

inline RunResult run_contractivity(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  const auto h = homogenizer_config(cfg);
  const double tol = cfg.real("tol");
  if (!(tol >= 0.0)) cfg.fail("tol", "must be non-negative");
  const auto rep = analysis::check_contractivity(cfg.state("rho0"), h, tol);

  auto t = table(cfg, "contractivity", {"step", "d_k"});
  for (std::size_t k = 0; k < rep.d_sequence.size(); ++k) t.row({fmt(k), format_real(rep.d_sequence[k])});
  r.artifacts.push_back({"contractivity.csv", t.render()});
  add_plot(r, opt, "contractivity.svg", "contractivity", "collision k", "d_k",
           {{"d_k", steps_axis(rep.d_sequence.size()), rep.d_sequence}});
  r.notes.push_back("final distance " + format_real(rep.final_distance) + ", max increase " + format_real(rep.max_violation));
  if (!rep.monotone) {
    r.exit_code = kExitInvariant;
    r.notes.push_back("contraction violated: d_k grew by " + format_real(rep.max_violation));
  }

  if (const std::size_t points = cfg.count("sweep"); points > 0) {
    analysis::SweepSpec spec;
    spec.points = points;
    spec.n_reservoir = h.n_reservoir;
    std::tie(spec.theta_min, spec.theta_max) = cfg.angle_pair("theta-range");
    if (!(spec.theta_min <= spec.theta_max)) cfg.fail("theta-range", "lo must not exceed hi");
    spec.mode = h.mode;
    spec.max_joint_qubits = h.max_joint_qubits;
    spec.root_seed = cfg.seed("seed");
    spec.tol = tol;
    const auto pts = analysis::contractivity_sweep(spec, opt.threads);
    auto s = table(cfg, "sweep", {"point", "seed", "monotone", "max_violation", "final_distance"});
    std::size_t bad = 0;
    double worst_final = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      bad += p.report.monotone ? 0 : 1;
      worst_final = std::max(worst_final, p.report.final_distance);
      s.row({fmt(i), std::to_string(p.seed), p.report.monotone ? "1" : "0", format_real(p.report.max_violation),
             format_real(p.report.final_distance)});
    }
    r.artifacts.push_back({"sweep.csv", s.render()});
    r.notes.push_back("sweep: " + fmt(points - bad) + "/" + fmt(points) + " monotone, worst final distance " +
                      format_real(worst_final));
    if (bad) r.exit_code = kExitInvariant;
  }
  return r;
}

inline RunResult run_stability(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  const auto h = homogenizer_config(cfg);
  const double eps = cfg.real("epsilon");
  if (!(eps > 0.0)) cfg.fail("epsilon", "must be positive");
  const double tol = cfg.real("tol");
  if (!(tol >= 0.0)) cfg.fail("tol", "must be non-negative");
  const auto rep = analysis::check_stability(cfg.state("rho-a"), cfg.state("rho-b"), h, eps, tol);

  auto t = table(cfg, "stability", {"step", "pairwise_distance"});
  for (std::size_t k = 0; k < rep.pairwise_distance.size(); ++k) t.row({fmt(k), format_real(rep.pairwise_distance[k])});
  r.artifacts.push_back({"stability.csv", t.render()});
  add_plot(r, opt, "stability.svg", "stability", "collision k", "pairwise distance",
           {{"||rho_a - rho_b||", steps_axis(rep.pairwise_distance.size()), rep.pairwise_distance}});
  r.notes.push_back(rep.washout_step ? "washout after " + fmt(*rep.washout_step) + " collisions"
                                     : "no washout below epsilon within " + fmt(h.n_reservoir) + " collisions");
  if (!rep.non_increasing) {
    r.exit_code = kExitInvariant;
    r.notes.push_back("pairwise distance grew by " + format_real(rep.max_increase));
  }
  return r;
}

inline RunResult run_figure2(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  const auto thetas = cfg.angles("theta");
  const auto rho0 = cfg.state("rho0");
  for (double th : thetas) (void)homogenizer_config(cfg, th);  // validate before spawning
  const auto trajs = parallel_map(thetas.size(), opt.threads,
                                  [&](std::size_t i) { return run_homogenization(rho0, homogenizer_config(cfg, thetas[i])); });

  auto t = table(cfg, "fidelity_curve", {"step", "theta", "fidelity", "l2_distance"});
  std::vector<io::Series> series;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto& tr = trajs[i];
    for (const auto& s : tr.steps)
      t.row({fmt(s.step), format_real(thetas[i]), format_real(s.fidelity), format_real(s.distance)});
    series.push_back({"theta=" + format_real(thetas[i]), steps_axis(tr.size()), tr.fidelities()});
    r.notes.push_back("theta " + format_real(thetas[i]) + ": fidelity " + format_real(tr.steps.front().fidelity) + " -> " +
                      format_real(tr.steps.back().fidelity));
  }
  r.artifacts.push_back({"fidelity_curve.csv", t.render()});
  add_plot(r, opt, "fidelity_curve.svg", "fidelity to the reservoir state", "collision k", "F(rho_k, xi)", series);
  return r;
}

inline RunResult run_circuit_verify(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  const auto n_min = static_cast<int>(cfg.count("n-min"));
  const auto n_max = static_cast<int>(cfg.count("n-max"));
  if (n_min < 1) cfg.fail("n-min", "must be at least 1");
  if (n_max < n_min) cfg.fail("n-max", "must be at least n-min");
  const double tol = cfg.real("tol");
  if (!(tol > 0.0)) cfg.fail("tol", "must be positive");

  circuit::Layout layout;
  std::string source = cfg.text("layout");
  std::string variant = "from-file";
  if (source == "search") {
    circuit::SearchOptions so;
    so.max_single = cfg.count("max-single");
    so.probe_n = static_cast<int>(cfg.count("probe-n"));
    if (so.probe_n < 1) cfg.fail("probe-n", "must be at least 1");
    so.n_min = n_min;
    so.n_max = n_max;
    so.tol = tol;
    so.workers = opt.threads;
    std::vector<circuit::RzVariant> order;
    const auto& v = cfg.text("variant");
    if (v != "standard") order.push_back(circuit::RzVariant::Printed);
    if (v != "printed") order.push_back(circuit::RzVariant::Standard);
    circuit::SearchResult found;
    std::uint64_t examined = 0;
    for (auto var : order) {
      so.variant = var;
      found = circuit::search_decomposition(so);
      examined += found.candidates_examined;
      r.notes.push_back(std::string("search over the ") + (var == circuit::RzVariant::Printed ? "printed" : "standard") +
                        " RZ(-2eta) set: " + (found.found ? "layout found" : "no layout"));
      if (found.found) break;
    }
    if (!found.found) {
      r.exit_code = kExitInvariant;
      r.notes.push_back("no 4-CNOT layout reproduces the partial SWAP family");
      auto t = table(cfg, "circuit_report", {"n", "variant", "theta", "phase", "deviation", "equivalent"});
      r.artifacts.push_back({"circuit_report.csv", t.render()});
      return r;
    }
    layout = found.layout;
    variant = found.variant == circuit::RzVariant::Printed ? "printed" : "standard";
    r.notes.push_back("candidates examined: " + std::to_string(examined));
  } else {
    try {
      layout = circuit::load_layout(source);
    } catch (const Error& e) {
      cfg.fail("layout", e.what());
    }
  }

  std::ostringstream ls;
  circuit::write_layout(ls, layout, "variant=" + variant);
  r.artifacts.push_back({"layout.csv", ls.str()});

  auto t = table(cfg, "circuit_report", {"n", "variant", "theta", "phase", "deviation", "equivalent"});
  std::size_t ok = 0;
  for (int n = n_min; n <= n_max; ++n) {
    const auto rep = circuit::verify_decomposition(n, circuit::instantiate(layout, n), std::nullopt, tol);
    ok += rep.equivalent ? 1 : 0;
    t.row({std::to_string(n), variant, rep.theta ? format_real(*rep.theta) : "", format_real(rep.phase),
           format_real(rep.deviation), rep.equivalent ? "1" : "0"});
  }
  r.artifacts.push_back({"circuit_report.csv", t.render()});
  r.notes.push_back("phase-equivalent to a partial SWAP for " + fmt(ok) + " of " + std::to_string(n_max - n_min + 1) + " values of n");
  if (ok != static_cast<std::size_t>(n_max - n_min + 1)) r.exit_code = kExitInvariant;
  return r;
}

inline RunResult run_qrc_narma(const ExperimentConfig& cfg, const RunOptions& opt) {
  RunResult r;
  reservoir::QrcOptions q;
  q.order = cfg.text("order") == "10" ? 10 : 2;
  q.n_reservoir = cfg.count("n");
  if (q.n_reservoir < 1) cfg.fail("n", "must be at least 1");
  if (q.n_reservoir + 1 > 12) cfg.fail("n", "the reservoir runs in exact-joint mode and is capped at 11 qubits");
  q.seed = cfg.seed("seed");
  q.length = cfg.count("length");
  q.lambda = cfg.real("lambda");
  if (!(q.lambda >= 0.0)) cfg.fail("lambda", "must be non-negative");
  q.washout = cfg.count("washout");
  q.train_fraction = cfg.real("train-fraction");
  if (!(q.train_fraction > 0.0 && q.train_fraction < 1.0)) cfg.fail("train-fraction", "must lie in (0, 1)");
  q.input_scale = cfg.real("input-scale");
  if (!(q.input_scale > 0.0)) cfg.fail("input-scale", "must be positive");
  q.coupling = {cfg.angle("theta0"), cfg.real("coupling-a"), cfg.real("coupling-b")};
  q.xi = cfg.state("xi");
  q.observables = cfg.labels("observables");
  q.reuse_reservoir = cfg.flag("reuse-reservoir");
  q.shots = cfg.count("shots");
  if (q.length <= static_cast<std::size_t>(q.order)) cfg.fail("length", "must exceed the NARMA order");
  if (q.washout + 4 > q.length) cfg.fail("washout", "leaves too few rows for training and testing");
  for (const auto& label : q.observables) {
    try {
      (void)reservoir::parse_observable(label, q.n_reservoir);
    } catch (const Error& e) {
      cfg.fail("observables", e.what());
    }
  }

  const auto res = reservoir::run_narma_benchmark(q);
  const auto& run = res.run;

  std::vector<std::string> header = {"step", "input"};
  header.insert(header.end(), run.observables.begin(), run.observables.end());
  auto f = table(cfg, "features", header);
  for (std::size_t k = 0; k < run.steps(); ++k) {
    std::vector<std::string> row = {fmt(k), format_real(run.inputs[k])};
    for (Eigen::Index m = 0; m < run.features.cols(); ++m) row.push_back(format_real(run.features(static_cast<Eigen::Index>(k), m)));
    f.row(std::move(row));
  }
  r.artifacts.push_back({"features.csv", f.render()});

  auto p = table(cfg, "predictions", {"step", "split", "target", "prediction", "baseline_prediction"});
  for (std::size_t i = 0; i < res.targets.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    p.row({fmt(q.washout + i), i < res.train_rows ? "train" : "test", format_real(res.targets[i]),
           format_real(res.predictions(ii)), format_real(res.baseline_predictions(ii))});
  }
  r.artifacts.push_back({"predictions.csv", p.render()});

  auto m = table(cfg, "metrics", {"split", "nmse", "lambda", "n_reservoir"});
  m.meta("narma_seed", std::to_string(res.series.seed));
  m.meta("narma_resamples", fmt(res.series.resamples));
  const std::string lam = format_real(q.lambda), nr = fmt(q.n_reservoir);
  m.row({"train", format_real(res.reservoir_nmse.train), lam, nr});
  m.row({"test", format_real(res.reservoir_nmse.test), lam, nr});
  m.row({"baseline_train", format_real(res.baseline_nmse.train), lam, nr});
  m.row({"baseline_test", format_real(res.baseline_nmse.test), lam, nr});
  r.artifacts.push_back({"metrics.csv", m.render()});

  if (opt.plot) {
    io::Series target{"target", {}, {}}, pred{"reservoir", {}, {}}, base{"baseline", {}, {}};
    for (std::size_t i = res.train_rows; i < res.targets.size(); ++i) {
      const double x = static_cast<double>(q.washout + i);
      target.x.push_back(x), target.y.push_back(res.targets[i]);
      pred.x.push_back(x), pred.y.push_back(res.predictions(static_cast<Eigen::Index>(i)));
      base.x.push_back(x), base.y.push_back(res.baseline_predictions(static_cast<Eigen::Index>(i)));
    }
    add_plot(r, opt, "predictions.svg", "NARMA" + cfg.text("order") + " test split", "step", "y", {target, pred, base});
  }
  if (res.series.resamples)
    r.notes.push_back("NARMA series diverged; resampled " + fmt(res.series.resamples) + " time(s), seed used " +
                      std::to_string(res.series.seed));
  r.notes.push_back("test NMSE " + format_real(res.reservoir_nmse.test) + " (memoryless baseline " +
                    format_real(res.baseline_nmse.test) + ")");
  return r;
}

}  // namespace detail

// Resolved config plus code version and artifact list; feeding it back via
// --config reproduces the run.
inline std::string manifest_text(const ExperimentConfig& cfg, const RunResult& r) {
  std::string out = "# qhomog run manifest\n# version=" + std::string(kVersion) + "\n# config_hash=" + cfg.hash() + "\n";
  for (const auto& a : r.artifacts) out += "# artifact=" + a.name + "\n";
  return out + cfg.canonical();
}

inline RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  RunResult r;
  const auto& e = cfg.experiment;
  if (e == "homogenize")
    r = detail::run_homogenize(cfg, opt);
  else if (e == "contractivity")
    r = detail::run_contractivity(cfg, opt);
  else if (e == "stability")
    r = detail::run_stability(cfg, opt);
  else if (e == "figure2")
    r = detail::run_figure2(cfg, opt);
  else if (e == "circuit-verify")
    r = detail::run_circuit_verify(cfg, opt);
  else if (e == "qrc-narma")
    r = detail::run_qrc_narma(cfg, opt);
  else
    throw ConfigError("unknown experiment '" + e + "'");
  r.artifacts.push_back({"manifest.txt", manifest_text(cfg, r)});
  return r;
}

// Refuses to overwrite existing files unless `force` is set; nothing is
// written if any target collides.
inline std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const RunResult& r, bool force) {
  std::vector<std::filesystem::path> paths;
  for (const auto& a : r.artifacts) paths.push_back(dir / a.name);
  if (!force)
    for (const auto& p : paths)
      if (std::filesystem::exists(p)) throw ConfigError("output collision: " + p.string() + " exists (use --force to overwrite)");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::ofstream out(paths[i], std::ios::binary | std::ios::trunc);
    out << r.artifacts[i].content;
    if (!out) throw Error("failed to write " + paths[i].string());
  }
  return paths;
}

}  // namespace qhomog::cli
