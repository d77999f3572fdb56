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

// Gate-level realization of the partial SWAP on two wires.
//
// Single-qubit conventions follow the printed matrices:
//   U1(n)      = diag(1, e^{i pi/(2n)})
//   RY(a)      = [[cos a, -sin a], [sin a, cos a]]      (RY(pi/4) as printed)
//   RZ(a)      = diag(e^{-i a}, e^{i a})
//   eta        = -pi/(2n)                               (so -2 eta = pi/n)
//   RZ(-2eta)  printed as e^{2 i eta} I; the diag(e^{2i eta}, e^{-2i eta})
//              variant is available as RzMinus2EtaStandard.
// Wire 0 is the more significant qubit of the 4x4 matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <future>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qhomog/homogenizer.hpp"
#include "qhomog/qstate.hpp"

namespace qhomog::circuit {

enum class GateKind {
  U1,
  RyPlus,               // RY(+pi/4)
  RyMinus,              // RY(-pi/4)
  RzEta,                // RZ(eta)
  RzMinus2EtaPrinted,   // e^{2 i eta} I
  RzMinus2EtaStandard,  // RZ(-2 eta)
  Ry,                   // RY at an arbitrary angle
  Rz,                   // RZ at an arbitrary angle
  Cnot,
};

struct Gate {
  GateKind kind;
  std::string name;
  std::vector<std::size_t> wires;  // control first for CNOT
  double parameter = 0.0;          // rotation or phase angle, radians
  ComplexMatrix matrix;            // 2x2 or 4x4
};

struct CircuitSpec {
  std::size_t n_wires = 2;
  std::vector<Gate> gates;  // circuit order: gates[0] acts first
};

inline double eta_for(int n) { return -std::numbers::pi / (2.0 * n); }

inline bool is_unitary(const ComplexMatrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return approx_equal(m * m.adjoint(), ComplexMatrix::Identity(m.rows(), m.cols()), tol);
}

inline ComplexMatrix ry_matrix(double a) {
  ComplexMatrix m(2, 2);
  m << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return m;
}

inline ComplexMatrix rz_matrix(double a) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = std::exp(-kI * a);
  m(1, 1) = std::exp(kI * a);
  return m;
}

inline ComplexMatrix phase_matrix(double a) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::exp(kI * a);
  return m;
}

inline void check_n(int n) {
  if (n < 1) throw DomainError("circuit parameter n must be a positive integer");
}

inline Gate gate_u1(int n, std::size_t wire = 0) {
  check_n(n);
  const double phi = std::numbers::pi / (2.0 * n);
  return {GateKind::U1, "u1", {wire}, phi, phase_matrix(phi)};
}

// Arbitrary-angle RY. The printed pair is ry(+-pi/4).
inline Gate gate_ry(double angle, std::size_t wire = 0) {
  GateKind kind = GateKind::Ry;
  std::string name = "ry";
  if (angle == std::numbers::pi / 4) {
    kind = GateKind::RyPlus;
    name = "ry_plus";
  } else if (angle == -std::numbers::pi / 4) {
    kind = GateKind::RyMinus;
    name = "ry_minus";
  }
  return {kind, name, {wire}, angle, ry_matrix(angle)};
}

inline Gate gate_rz(double angle, std::size_t wire = 0) { return {GateKind::Rz, "rz", {wire}, angle, rz_matrix(angle)}; }

inline Gate gate_rz_eta(int n, std::size_t wire = 0) {
  check_n(n);
  const double eta = eta_for(n);
  return {GateKind::RzEta, "rz_eta", {wire}, eta, rz_matrix(eta)};
}

// RZ(-2 eta) exactly as printed: both diagonal entries e^{2 i eta}.
inline Gate gate_rz_minus_2eta_printed(int n, std::size_t wire = 0) {
  check_n(n);
  const double a = -2.0 * eta_for(n);
  return {GateKind::RzMinus2EtaPrinted, "rz_m2eta_printed", {wire}, a,
          std::exp(-kI * a) * ComplexMatrix::Identity(2, 2)};
}

inline Gate gate_rz_minus_2eta_standard(int n, std::size_t wire = 0) {
  check_n(n);
  const double a = -2.0 * eta_for(n);
  return {GateKind::RzMinus2EtaStandard, "rz_m2eta_standard", {wire}, a, rz_matrix(a)};
}

inline Gate gate_cnot(std::size_t control, std::size_t target) {
  if (control == target) throw DimensionError("cnot: control and target must differ");
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  // local basis |control target>
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(3, 2) = 1.0;
  m(2, 3) = 1.0;
  return {GateKind::Cnot, "cnot", {control, target}, 0.0, m};
}

// Rebuilds a gate's matrix from its kind and (possibly shifted) parameter.
inline Gate with_parameter(Gate g, double parameter) {
  g.parameter = parameter;
  switch (g.kind) {
    case GateKind::U1: g.matrix = phase_matrix(parameter); break;
    case GateKind::RyPlus:
    case GateKind::RyMinus:
    case GateKind::Ry: g.matrix = ry_matrix(parameter); break;
    case GateKind::RzEta:
    case GateKind::RzMinus2EtaStandard:
    case GateKind::Rz: g.matrix = rz_matrix(parameter); break;
    case GateKind::RzMinus2EtaPrinted: g.matrix = std::exp(-kI * parameter) * ComplexMatrix::Identity(2, 2); break;
    case GateKind::Cnot: break;
  }
  return g;
}

// Full 2^w x 2^w matrix of a gate in an n-wire register.
inline ComplexMatrix embed(const Gate& g, std::size_t n_wires) {
  for (auto w : g.wires)
    if (w >= n_wires) throw DimensionError("gate '" + g.name + "' addresses wire " + std::to_string(w) + " outside register");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_wires);
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  const std::size_t k = g.wires.size();
  if (k == 0 || (std::size_t{1} << k) != static_cast<std::size_t>(g.matrix.rows()))
    throw DimensionError("gate '" + g.name + "' has inconsistent wires and matrix size");
  if (k == 2 && g.wires[0] == g.wires[1]) throw DimensionError("gate '" + g.name + "' repeats a wire");
  auto local_of = [&](std::size_t global) {
    std::size_t l = 0;
    for (std::size_t i = 0; i < k; ++i) l = (l << 1) | ((global >> (n_wires - 1 - g.wires[i])) & 1U);
    return l;
  };
  std::size_t gate_mask = 0;
  for (auto w : g.wires) gate_mask |= std::size_t{1} << (n_wires - 1 - w);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto ru = static_cast<std::size_t>(r), cu = static_cast<std::size_t>(c);
      if ((ru & ~gate_mask) != (cu & ~gate_mask)) continue;
      out(r, c) = g.matrix(static_cast<Eigen::Index>(local_of(ru)), static_cast<Eigen::Index>(local_of(cu)));
    }
  return out;
}

// Circuit order left to right; matrix order right to left.
inline ComplexMatrix compile(const CircuitSpec& spec) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << spec.n_wires);
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const auto& g : spec.gates) u = embed(g, spec.n_wires) * u;
  return u;
}

struct PhaseEquivalence {
  bool equivalent = false;
  double phase = 0.0;      // u ~ e^{i phase} v
  double deviation = 0.0;  // || u - e^{i phase} v ||_2
};

inline PhaseEquivalence equivalent_up_to_phase(const ComplexMatrix& u, const ComplexMatrix& v, double tol = 1e-10) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("equivalent_up_to_phase: dimension mismatch");
  if (!is_unitary(u, 1e-8) || !is_unitary(v, 1e-8)) throw DomainError("equivalent_up_to_phase: non-unitary input");
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  const double phase = std::arg(u(r, c) / v(r, c));
  const double dev = (u - std::exp(kI * phase) * v).norm();
  return {dev <= tol, phase, dev};
}

// If u equals a partial SWAP up to global phase, the angle in (-pi/2, pi/2].
inline std::optional<double> partial_swap_angle(const ComplexMatrix& u, double tol = 1e-10) {
  if (u.rows() != 4 || u.cols() != 4) return std::nullopt;
  // e^{i phi} U(theta): |00>,|11> -> e^{i(phi+theta)}; on span{|01>,|10>} e^{i phi}(cos, i sin; i sin, cos)
  const Complex denom = u(1, 1) - u(1, 2);  // e^{i(phi - theta)}
  if (std::abs(denom) < 0.5) return std::nullopt;
  double theta = 0.5 * std::arg(u(0, 0) / denom);
  if (theta <= -std::numbers::pi / 2 + 1e-15) theta += std::numbers::pi;
  if (!is_unitary(u, 1e-8)) return std::nullopt;
  if (!equivalent_up_to_phase(u, partial_swap_unitary(theta), tol).equivalent) return std::nullopt;
  return theta;
}

inline bool is_decomposition_single(GateKind k) {
  return k == GateKind::U1 || k == GateKind::RyPlus || k == GateKind::RyMinus || k == GateKind::RzEta ||
         k == GateKind::RzMinus2EtaPrinted || k == GateKind::RzMinus2EtaStandard;
}

struct DecompositionReport {
  int n = 0;
  std::size_t cnot_count = 0;
  std::size_t single_count = 0;
  bool equivalent = false;            // compile(candidate) ~ U(theta) up to phase
  std::optional<double> theta;        // angle the candidate realizes (or was checked against)
  double phase = 0.0;
  double deviation = 0.0;
  bool uses_printed_phase_gate = false;
  bool uses_standard_rz_variant = false;
};

// Checks the 4-CNOT / <=6 single-qubit budget over the printed gate set, then
// whether the compiled circuit is a partial SWAP. With expected_theta set, the
// comparison is against U(expected_theta) instead of the extracted angle.
inline DecompositionReport verify_decomposition(int n, const CircuitSpec& candidate, std::optional<double> expected_theta = {},
                                                double tol = 1e-10) {
  check_n(n);
  if (candidate.n_wires != 2) throw DimensionError("verify_decomposition: candidate must act on two wires");
  DecompositionReport rep;
  rep.n = n;
  for (const auto& g : candidate.gates) {
    if (g.kind == GateKind::Cnot) {
      ++rep.cnot_count;
    } else if (is_decomposition_single(g.kind)) {
      ++rep.single_count;
      rep.uses_printed_phase_gate |= g.kind == GateKind::RzMinus2EtaPrinted;
      rep.uses_standard_rz_variant |= g.kind == GateKind::RzMinus2EtaStandard;
    } else {
      throw DomainError("gate budget violation: '" + g.name + "' is outside the decomposition gate set");
    }
  }
  if (rep.cnot_count != 4 || rep.single_count > 6)
    throw DomainError("gate budget violation: " + std::to_string(rep.cnot_count) + " CNOTs and " +
                      std::to_string(rep.single_count) + " single-qubit gates (need 4 and at most 6)");
  const ComplexMatrix u = compile(candidate);
  if (expected_theta) {
    const auto eq = equivalent_up_to_phase(u, partial_swap_unitary(*expected_theta), tol);
    rep.theta = expected_theta;
    rep.equivalent = eq.equivalent;
    rep.phase = eq.phase;
    rep.deviation = eq.deviation;
    return rep;
  }
  rep.theta = partial_swap_angle(u, tol);
  if (rep.theta) {
    const auto eq = equivalent_up_to_phase(u, partial_swap_unitary(*rep.theta), tol);
    rep.equivalent = eq.equivalent;
    rep.phase = eq.phase;
    rep.deviation = eq.deviation;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Symbolic layouts and the decomposition search.

struct LayoutGate {
  GateKind kind;
  std::vector<std::size_t> wires;

  friend bool operator==(const LayoutGate&, const LayoutGate&) = default;
};

using Layout = std::vector<LayoutGate>;

inline Gate instantiate_gate(const LayoutGate& lg, int n) {
  if (lg.kind == GateKind::Cnot) {
    if (lg.wires.size() != 2) throw DimensionError("cnot needs two wires");
    return gate_cnot(lg.wires[0], lg.wires[1]);
  }
  if (lg.wires.size() != 1) throw DimensionError("single-qubit gate needs one wire");
  const std::size_t w = lg.wires[0];
  switch (lg.kind) {
    case GateKind::U1: return gate_u1(n, w);
    case GateKind::RyPlus: return gate_ry(std::numbers::pi / 4, w);
    case GateKind::RyMinus: return gate_ry(-std::numbers::pi / 4, w);
    case GateKind::RzEta: return gate_rz_eta(n, w);
    case GateKind::RzMinus2EtaPrinted: return gate_rz_minus_2eta_printed(n, w);
    case GateKind::RzMinus2EtaStandard: return gate_rz_minus_2eta_standard(n, w);
    default: throw DomainError("layout gate kind has no parameter family");
  }
}

// Concrete circuit for parameter n; optionally shifts one gate's angle.
inline CircuitSpec instantiate(const Layout& layout, int n, std::optional<std::size_t> perturb_index = {},
                               double delta = 0.0) {
  CircuitSpec spec;
  spec.n_wires = 2;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    Gate g = instantiate_gate(layout[i], n);
    if (perturb_index && *perturb_index == i) g = with_parameter(g, g.parameter + delta);
    spec.gates.push_back(std::move(g));
  }
  return spec;
}

enum class RzVariant { Printed, Standard };

struct SearchOptions {
  RzVariant variant = RzVariant::Printed;
  std::size_t cnot_count = 4;
  std::size_t max_single = 6;
  int probe_n = 3;  // screening parameter; candidates are then checked on [n_min, n_max]
  int n_min = 1;
  int n_max = 8;
  double tol = 1e-10;
  std::size_t workers = 1;
};

struct SearchResult {
  bool found = false;
  RzVariant variant = RzVariant::Printed;
  Layout layout;
  std::vector<double> thetas;  // theta(n) for n = n_min..n_max
  std::uint64_t candidates_examined = 0;
};

namespace detail {

struct Token {
  GateKind kind;
  std::size_t wire;  // control wire for CNOT
};

inline bool is_diagonal(GateKind k) {
  return k == GateKind::U1 || k == GateKind::RzEta || k == GateKind::RzMinus2EtaPrinted ||
         k == GateKind::RzMinus2EtaStandard || k == GateKind::Rz;
}

// Token alphabet in lexicographic order: CNOT(0,1), CNOT(1,0), then
// single-qubit gates wire-major.
inline std::vector<Token> alphabet(RzVariant variant) {
  std::vector<Token> a{{GateKind::Cnot, 0}, {GateKind::Cnot, 1}};
  std::vector<GateKind> singles{GateKind::U1, GateKind::RyPlus, GateKind::RyMinus, GateKind::RzEta};
  // The printed RZ(-2eta) is a multiple of the identity and never changes
  // phase-equivalence, so it is not enumerated.
  if (variant == RzVariant::Standard) singles.push_back(GateKind::RzMinus2EtaStandard);
  for (std::size_t w = 0; w < 2; ++w)
    for (auto k : singles) a.push_back({k, w});
  return a;
}

inline LayoutGate to_layout_gate(const Token& t) {
  if (t.kind == GateKind::Cnot) return {GateKind::Cnot, {t.wire, 1 - t.wire}};
  return {t.kind, {t.wire}};
}

// Pruning keeps exactly one representative of trivially equal sequences:
// adjacent gates on different wires are ordered wire 0 first, adjacent
// diagonal gates on one wire are sorted, inverse RY pairs and repeated CNOTs
// are dropped, and a diagonal gate on a CNOT's control wire is placed after it.
class Searcher {
 public:
  Searcher(const SearchOptions& opt, std::vector<Token> alpha) : opt_(opt), alpha_(std::move(alpha)) {
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      const Gate g = instantiate_gate(to_layout_gate(alpha_[i]), opt_.probe_n);
      CircuitSpec one{2, {g}};
      mats_.push_back(compile(one));
    }
  }

  // Depth-first search of all sequences whose first token is `first`.
  std::optional<std::vector<std::size_t>> run_from(std::size_t first) {
    seq_.clear();
    found_.reset();
    Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    if (admissible(first)) push_and_recurse(first, id, 0, 0);
    return found_;
  }

  std::uint64_t examined() const { return examined_; }

 private:
  bool admissible(std::size_t idx) const {
    const Token& t = alpha_[idx];
    if (seq_.empty()) return true;
    const Token& last = alpha_[seq_.back()];
    if (t.kind == GateKind::Cnot) {
      if (last.kind == GateKind::Cnot && last.wire == t.wire) return false;
      if (last.kind != GateKind::Cnot && is_diagonal(last.kind) && last.wire == t.wire) return false;
      return true;
    }
    if (last.kind == GateKind::Cnot) return true;
    if (last.wire == 1 && t.wire == 0) return false;
    if (last.wire == t.wire) {
      if (is_diagonal(last.kind) && is_diagonal(t.kind) && idx < seq_.back()) return false;
      if ((last.kind == GateKind::RyPlus && t.kind == GateKind::RyMinus) ||
          (last.kind == GateKind::RyMinus && t.kind == GateKind::RyPlus))
        return false;
    }
    return true;
  }

  void push_and_recurse(std::size_t idx, const Eigen::Matrix4cd& u, std::size_t nc, std::size_t ns) {
    const bool cnot = alpha_[idx].kind == GateKind::Cnot;
    seq_.push_back(idx);
    const Eigen::Matrix4cd next = Eigen::Matrix4cd(mats_[idx]) * u;
    recurse(next, nc + (cnot ? 1 : 0), ns + (cnot ? 0 : 1));
    seq_.pop_back();
  }

  void recurse(const Eigen::Matrix4cd& u, std::size_t nc, std::size_t ns) {
    if (found_) return;
    if (nc == opt_.cnot_count) {
      ++examined_;
      if (accept(u)) {
        found_ = seq_;
        return;
      }
      if (ns == opt_.max_single) return;
    }
    for (std::size_t i = 0; i < alpha_.size() && !found_; ++i) {
      const bool cnot = alpha_[i].kind == GateKind::Cnot;
      if (cnot && nc >= opt_.cnot_count) continue;
      if (!cnot && ns >= opt_.max_single) continue;
      if (!admissible(i)) continue;
      push_and_recurse(i, u, nc, ns);
    }
  }

  // Cheap structural screen: a phased partial SWAP has zeros outside the
  // |00>, |11> diagonal and the {|01>, |10>} block, with u00 = u33.
  static bool partial_swap_shaped(const Eigen::Matrix4cd& u) {
    constexpr double eps = 1e-8;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        const bool block = (r == c) || (r == 1 && c == 2) || (r == 2 && c == 1);
        if (!block && std::abs(u(r, c)) > eps) return false;
      }
    return std::abs(u(0, 0) - u(3, 3)) < eps && std::abs(u(1, 1) - u(2, 2)) < eps && std::abs(u(1, 2) - u(2, 1)) < eps;
  }

  bool accept(const Eigen::Matrix4cd& u) const {
    if (!partial_swap_shaped(u)) return false;
    const auto theta = partial_swap_angle(ComplexMatrix(u), opt_.tol);
    if (!theta || std::abs(std::sin(*theta)) < 1e-6) return false;
    Layout layout;
    for (auto i : seq_) layout.push_back(to_layout_gate(alpha_[i]));
    for (int n = opt_.n_min; n <= opt_.n_max; ++n) {
      const auto t = partial_swap_angle(compile(instantiate(layout, n)), opt_.tol);
      if (!t || std::abs(std::sin(*t)) < 1e-6) return false;
    }
    return true;
  }

  SearchOptions opt_;
  std::vector<Token> alpha_;
  std::vector<Eigen::Matrix4cd> mats_;
  std::vector<std::size_t> seq_;
  std::optional<std::vector<std::size_t>> found_;
  std::uint64_t examined_ = 0;
};

}  // namespace detail

// Exhaustive search for a layout with exactly `cnot_count` CNOTs and at most
// `max_single` single-qubit gates that realizes a non-trivial partial SWAP for
// every n in [n_min, n_max]. Returns the lexicographically first such layout;
// the subtree of each first token may be searched on its own worker.
inline SearchResult search_decomposition(const SearchOptions& opt = {}) {
  const auto alpha = detail::alphabet(opt.variant);
  struct Branch {
    std::optional<std::vector<std::size_t>> hit;
    std::uint64_t examined = 0;
  };
  auto run_branch = [&opt, &alpha](std::size_t first) {
    detail::Searcher s(opt, alpha);
    Branch b;
    b.hit = s.run_from(first);
    b.examined = s.examined();
    return b;
  };

  std::vector<Branch> branches(alpha.size());
  const std::size_t workers = std::max<std::size_t>(1, opt.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      branches[i] = run_branch(i);
      if (branches[i].hit) break;  // later first tokens are lexicographically larger
    }
  } else {
    for (std::size_t start = 0; start < alpha.size(); start += workers) {
      std::vector<std::future<Branch>> futs;
      for (std::size_t i = start; i < std::min(alpha.size(), start + workers); ++i)
        futs.push_back(std::async(std::launch::async, run_branch, i));
      bool any = false;
      for (std::size_t j = 0; j < futs.size(); ++j) {
        branches[start + j] = futs[j].get();
        any |= branches[start + j].hit.has_value();
      }
      if (any) break;
    }
  }

  SearchResult res;
  res.variant = opt.variant;
  for (const auto& b : branches) res.candidates_examined += b.examined;
  for (const auto& b : branches) {
    if (!b.hit) continue;
    res.found = true;
    for (auto i : *b.hit) res.layout.push_back(detail::to_layout_gate(alpha[i]));
    break;
  }
  if (res.found)
    for (int n = opt.n_min; n <= opt.n_max; ++n)
      res.thetas.push_back(partial_swap_angle(compile(instantiate(res.layout, n)), opt.tol).value());
  return res;
}

// ---------------------------------------------------------------------------
// Layout data file.
//
//   # schema=partial_swap_layout/1
//   index,gate,wires,parameter
//   0,cnot,0 1,
//   1,ry_plus,0,pi/4
//
// `gate` is one of cnot, u1, ry_plus, ry_minus, rz_eta, rz_m2eta_printed,
// rz_m2eta_standard; `wires` is space separated (control first for cnot);
// `parameter` is the symbolic angle in terms of n and is checked on read.

inline std::string_view kind_name(GateKind k) {
  switch (k) {
    case GateKind::U1: return "u1";
    case GateKind::RyPlus: return "ry_plus";
    case GateKind::RyMinus: return "ry_minus";
    case GateKind::RzEta: return "rz_eta";
    case GateKind::RzMinus2EtaPrinted: return "rz_m2eta_printed";
    case GateKind::RzMinus2EtaStandard: return "rz_m2eta_standard";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Cnot: return "cnot";
  }
  return "?";
}

inline std::string_view kind_parameter(GateKind k) {
  switch (k) {
    case GateKind::U1: return "pi/(2n)";
    case GateKind::RyPlus: return "pi/4";
    case GateKind::RyMinus: return "-pi/4";
    case GateKind::RzEta: return "-pi/(2n)";
    case GateKind::RzMinus2EtaPrinted:
    case GateKind::RzMinus2EtaStandard: return "pi/n";
    default: return "";
  }
}

inline GateKind kind_from_name(std::string_view s) {
  for (auto k : {GateKind::U1, GateKind::RyPlus, GateKind::RyMinus, GateKind::RzEta, GateKind::RzMinus2EtaPrinted,
                 GateKind::RzMinus2EtaStandard, GateKind::Cnot})
    if (kind_name(k) == s) return k;
  throw DomainError("unknown layout gate '" + std::string(s) + "'");
}

inline void write_layout(std::ostream& os, const Layout& layout, std::string_view comment = {}) {
  os << "# schema=partial_swap_layout/1\n";
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  }
  os << "index,gate,wires,parameter\n";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    os << i << ',' << kind_name(layout[i].kind) << ',';
    for (std::size_t j = 0; j < layout[i].wires.size(); ++j) os << (j ? " " : "") << layout[i].wires[j];
    os << ',' << kind_parameter(layout[i].kind) << '\n';
  }
}

inline Layout read_layout(std::istream& is) {
  Layout layout;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "index,gate,wires,parameter") throw DomainError("layout line " + std::to_string(lineno) + ": bad header");
      header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) throw DomainError("layout line " + std::to_string(lineno) + ": expected 4 fields");
    if (fields[0] != std::to_string(layout.size()))
      throw DomainError("layout line " + std::to_string(lineno) + ": index out of sequence");
    LayoutGate g{kind_from_name(fields[1]), {}};
    std::istringstream ws(fields[2]);
    for (std::size_t w; ws >> w;) g.wires.push_back(w);
    if (!ws.eof()) throw DomainError("layout line " + std::to_string(lineno) + ": bad wire list");
    const std::size_t arity = g.kind == GateKind::Cnot ? 2 : 1;
    if (g.wires.size() != arity || std::any_of(g.wires.begin(), g.wires.end(), [](std::size_t w) { return w > 1; }) ||
        (arity == 2 && g.wires[0] == g.wires[1]))
      throw DomainError("layout line " + std::to_string(lineno) + ": bad wires for " + fields[1]);
    if (fields[3] != kind_parameter(g.kind))
      throw DomainError("layout line " + std::to_string(lineno) + ": parameter '" + fields[3] + "' does not match gate " + fields[1]);
    layout.push_back(std::move(g));
  }
  if (!header) throw DomainError("layout: missing header");
  return layout;
}

inline Layout load_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open layout file " + path);
  return read_layout(in);
}

}  // namespace qhomog::circuit
