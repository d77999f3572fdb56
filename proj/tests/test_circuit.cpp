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

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "qhomog/circuit.hpp"

namespace qhomog::circuit {
namespace {

constexpr double kPi = std::numbers::pi;

CircuitSpec swap_via_three_cnots() { return {2, {gate_cnot(0, 1), gate_cnot(1, 0), gate_cnot(0, 1)}}; }

ComplexMatrix random_unitary(std::uint64_t seed, Eigen::Index dim = 4) {
  Rng rng(seed);
  ComplexMatrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

// Partial-SWAP angles are defined modulo pi.
double angle_gap_mod_pi(double a, double b) {
  const double d = std::remainder(a - b, kPi);
  return std::abs(d);
}

Layout stored_layout() { return load_layout(QHOMOG_SOURCE_DIR "/data/partial_swap_layout.csv"); }

TEST(Gates, U1Values) {
  const Gate g1 = gate_u1(1);
  EXPECT_TRUE(approx_equal(g1.matrix, Eigen::Matrix2cd{{1.0, 0.0}, {0.0, kI}}, 1e-15));
  EXPECT_TRUE(approx_equal(gate_u1(1'000'000).matrix, ComplexMatrix::Identity(2, 2), 1e-5));
  for (int n = 1; n <= 8; ++n) EXPECT_TRUE(is_unitary(gate_u1(n).matrix, 1e-12));
  EXPECT_THROW(gate_u1(0), DomainError);
}

TEST(Gates, PrintedRotationMatrices) {
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(approx_equal(gate_ry(kPi / 4).matrix, Eigen::Matrix2cd{{h, -h}, {h, h}}, 1e-15));
  EXPECT_TRUE(approx_equal(gate_ry(-kPi / 4).matrix, Eigen::Matrix2cd{{h, h}, {-h, h}}, 1e-15));
  EXPECT_EQ(gate_ry(kPi / 4).kind, GateKind::RyPlus);
  EXPECT_EQ(gate_ry(-kPi / 4).kind, GateKind::RyMinus);
  EXPECT_TRUE(approx_equal(gate_ry(kPi / 4).matrix * gate_ry(-kPi / 4).matrix, ComplexMatrix::Identity(2, 2), 1e-15));
  for (double eta : {-1.1, -0.3, 0.2, 0.9}) {
    EXPECT_TRUE(approx_equal(gate_rz(eta).matrix * gate_rz(-eta).matrix, ComplexMatrix::Identity(2, 2), 1e-15));
    EXPECT_EQ(gate_rz(eta).matrix(0, 0), std::exp(-kI * eta));
  }
}

TEST(Gates, PrintedRzMinus2EtaIsGlobalPhase) {
  // -2 eta = pi/n; printed entries are e^{2 i eta} = e^{-i pi/n}
  const Gate g = gate_rz_minus_2eta_printed(2);
  EXPECT_TRUE(approx_equal(g.matrix, std::exp(-kI * kPi / 2.0) * ComplexMatrix::Identity(2, 2), 1e-15));
  EXPECT_EQ(g.matrix(0, 0), g.matrix(1, 1));
  const Gate s = gate_rz_minus_2eta_standard(2);
  EXPECT_TRUE(approx_equal(s.matrix, gate_rz(kPi / 2).matrix, 0.0));
}

TEST(Gates, EveryConstructorIsUnitary) {
  for (int n = 1; n <= 8; ++n)
    for (const Gate& g : {gate_u1(n), gate_rz_eta(n), gate_rz_minus_2eta_printed(n), gate_rz_minus_2eta_standard(n)})
      EXPECT_TRUE(is_unitary(g.matrix, 1e-12)) << g.name << " n=" << n;
  for (double a = -3.0; a <= 3.0; a += 0.25) {
    EXPECT_TRUE(is_unitary(gate_ry(a).matrix, 1e-12));
    EXPECT_TRUE(is_unitary(gate_rz(a).matrix, 1e-12));
  }
  EXPECT_TRUE(is_unitary(gate_cnot(0, 1).matrix, 1e-12));
  EXPECT_THROW(gate_cnot(1, 1), DimensionError);
}

TEST(Compile, EmptyAndInvolution) {
  EXPECT_TRUE(approx_equal(compile(CircuitSpec{}), ComplexMatrix::Identity(4, 4), 0.0));
  EXPECT_TRUE(approx_equal(compile({2, {gate_cnot(0, 1), gate_cnot(0, 1)}}), ComplexMatrix::Identity(4, 4), 0.0));
}

TEST(Compile, CnotOrientation) {
  const ComplexMatrix u01 = compile({2, {gate_cnot(0, 1)}});
  const ComplexMatrix u10 = compile({2, {gate_cnot(1, 0)}});
  // |10> -> |11> when wire 0 controls
  EXPECT_EQ(u01(3, 2), Complex(1.0, 0.0));
  // |01> -> |11> when wire 1 controls
  EXPECT_EQ(u10(3, 1), Complex(1.0, 0.0));
}

TEST(Compile, ThreeCnotsMakeSwap) {
  EXPECT_TRUE(approx_equal(compile(swap_via_three_cnots()), swap_operator(), 0.0));
}

TEST(Compile, SingleQubitEmbeddingMatchesKron) {
  const Gate a = gate_ry(0.3, 0);
  const Gate b = gate_rz(0.7, 1);
  EXPECT_TRUE(approx_equal(compile({2, {a}}), kron(a.matrix, ComplexMatrix::Identity(2, 2)), 0.0));
  EXPECT_TRUE(approx_equal(compile({2, {b}}), kron(ComplexMatrix::Identity(2, 2), b.matrix), 0.0));
  EXPECT_TRUE(approx_equal(compile({2, {a, b}}), kron(a.matrix, b.matrix), 1e-15));
}

TEST(Compile, Multiplicative) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    CircuitSpec a{2, {}}, b{2, {}};
    for (int i = 0; i < 4; ++i) {
      a.gates.push_back(rng.uniform() < 0.3 ? gate_cnot(i % 2, 1 - i % 2) : gate_ry(rng.uniform(-2, 2), i % 2));
      b.gates.push_back(rng.uniform() < 0.3 ? gate_cnot(1 - i % 2, i % 2) : gate_rz(rng.uniform(-2, 2), (i + 1) % 2));
    }
    CircuitSpec ab = a;
    ab.gates.insert(ab.gates.end(), b.gates.begin(), b.gates.end());
    EXPECT_TRUE(approx_equal(compile(ab), compile(b) * compile(a), 1e-12));
  }
}

TEST(Compile, WireOutOfRangeThrows) {
  EXPECT_THROW(compile({2, {gate_ry(0.1, 2)}}), DimensionError);
}

TEST(PhaseEquivalence, ConstructedCases) {
  const ComplexMatrix u = random_unitary(1);
  auto same = equivalent_up_to_phase(u, u);
  EXPECT_TRUE(same.equivalent);
  EXPECT_NEAR(same.phase, 0.0, 1e-15);
  auto shifted = equivalent_up_to_phase(std::exp(kI * (kPi / 7)) * u, u);
  EXPECT_TRUE(shifted.equivalent);
  EXPECT_NEAR(shifted.phase, kPi / 7, 1e-12);
  EXPECT_FALSE(equivalent_up_to_phase(ComplexMatrix::Identity(4, 4), swap_operator()).equivalent);
  EXPECT_THROW(equivalent_up_to_phase(2.0 * u, u), DomainError);
  EXPECT_THROW(equivalent_up_to_phase(u, ComplexMatrix::Identity(2, 2)), DimensionError);
}

TEST(PhaseEquivalence, IsAnEquivalenceRelationOnRandomUnitaries) {
  Rng rng(9);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ComplexMatrix a = random_unitary(100 + s);
    const ComplexMatrix b = std::exp(kI * rng.uniform(-3, 3)) * a;
    const ComplexMatrix c = std::exp(kI * rng.uniform(-3, 3)) * b;
    const ComplexMatrix other = random_unitary(500 + s);
    EXPECT_TRUE(equivalent_up_to_phase(a, a).equivalent);
    EXPECT_EQ(equivalent_up_to_phase(a, b).equivalent, equivalent_up_to_phase(b, a).equivalent);
    EXPECT_TRUE(equivalent_up_to_phase(a, b).equivalent && equivalent_up_to_phase(b, c).equivalent);
    EXPECT_TRUE(equivalent_up_to_phase(a, c).equivalent);
    EXPECT_FALSE(equivalent_up_to_phase(a, other).equivalent);
  }
}

TEST(PartialSwapAngle, RecoversAngleUpToPhase) {
  for (double theta : {-1.2, -0.5, 0.1, 0.7, 1.5}) {
    const auto t = partial_swap_angle(std::exp(kI * 0.37) * partial_swap_unitary(theta));
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, theta, 1e-12);
  }
  // theta and theta + pi differ by a global sign
  EXPECT_NEAR(*partial_swap_angle(partial_swap_unitary(2.0)), 2.0 - kPi, 1e-12);
  EXPECT_FALSE(partial_swap_angle(random_unitary(3)).has_value());
}

TEST(VerifyDecomposition, BudgetViolationIsReported) {
  // SWAP via 3 CNOTs plus a padding CNOT pair: five CNOTs
  CircuitSpec c = swap_via_three_cnots();
  c.gates.push_back(gate_cnot(0, 1));
  c.gates.push_back(gate_cnot(0, 1));
  EXPECT_THROW(verify_decomposition(1, c, kPi / 2), DomainError);
  // four CNOTs but a gate outside the printed set
  CircuitSpec d{2, {gate_cnot(0, 1), gate_cnot(1, 0), gate_cnot(0, 1), gate_cnot(1, 0), gate_rz(0.1, 0)}};
  EXPECT_THROW(verify_decomposition(1, d), DomainError);
}

TEST(VerifyDecomposition, StructuralCheckOnFourCnotSwapFamily) {
  // CX01 CX10 CX01 is SWAP; one more CX01 breaks it.
  CircuitSpec c{2, {gate_cnot(0, 1), gate_cnot(1, 0), gate_cnot(0, 1), gate_cnot(0, 1)}};
  const auto rep = verify_decomposition(1, c, kPi / 2);
  EXPECT_EQ(rep.cnot_count, 4u);
  EXPECT_EQ(rep.single_count, 0u);
  EXPECT_FALSE(rep.equivalent);
}

TEST(VerifyDecomposition, StoredLayoutRealizesPartialSwap) {
  const Layout layout = stored_layout();
  for (int n = 1; n <= 8; ++n) {
    const auto rep = verify_decomposition(n, instantiate(layout, n));
    ASSERT_TRUE(rep.theta.has_value()) << n;
    EXPECT_TRUE(rep.equivalent) << n;
    EXPECT_LE(rep.deviation, 1e-10);
    EXPECT_LE(angle_gap_mod_pi(*rep.theta, -kPi / (2.0 * n)), 1e-10) << n;
    EXPECT_EQ(rep.cnot_count, 4u);
    EXPECT_EQ(rep.single_count, 6u);
    EXPECT_FALSE(rep.uses_printed_phase_gate);
  }
  // n = 1 is a full SWAP
  EXPECT_TRUE(equivalent_up_to_phase(compile(instantiate(layout, 1)), swap_operator(), 1e-10).equivalent);
}

TEST(VerifyDecomposition, SingleGatePerturbationBreaksEquivalence) {
  const Layout layout = stored_layout();
  for (int n = 1; n <= 8; ++n) {
    const double theta = -kPi / (2.0 * n);
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (layout[i].kind == GateKind::Cnot) continue;
      for (double delta : {0.01, -0.01}) {
        const auto rep = verify_decomposition(n, instantiate(layout, n, i, delta), theta);
        EXPECT_FALSE(rep.equivalent) << "n=" << n << " gate " << i;
      }
    }
  }
}

TEST(VerifyDecomposition, PrintedPhaseGateNeverChangesOutcome) {
  Layout layout = stored_layout();
  // Replacing nothing, but appending the global-phase gate would exceed the
  // single-qubit budget; swap it in for a CNOT-free check of phase invariance.
  const ComplexMatrix base = compile(instantiate(layout, 3));
  CircuitSpec with_phase = instantiate(layout, 3);
  with_phase.gates.push_back(gate_rz_minus_2eta_printed(3, 1));
  EXPECT_TRUE(equivalent_up_to_phase(compile(with_phase), base, 1e-12).equivalent);
}

TEST(Layout, RoundTripAndErrors) {
  const Layout layout = stored_layout();
  std::stringstream ss;
  write_layout(ss, layout, "comment line");
  EXPECT_EQ(read_layout(ss), layout);

  std::istringstream bad_param("index,gate,wires,parameter\n0,u1,0,pi/4\n");
  EXPECT_THROW(read_layout(bad_param), DomainError);
  std::istringstream bad_gate("index,gate,wires,parameter\n0,toffoli,0,\n");
  EXPECT_THROW(read_layout(bad_gate), DomainError);
  std::istringstream bad_wire("index,gate,wires,parameter\n0,cnot,0 0,\n");
  EXPECT_THROW(read_layout(bad_wire), DomainError);
  std::istringstream no_header("0,cnot,0 1,\n");
  EXPECT_THROW(read_layout(no_header), DomainError);
}

TEST(Search, FindsStoredLayoutWithPrintedGateSet) {
  SearchOptions opt;
  opt.workers = 2;
  const auto res = search_decomposition(opt);
  ASSERT_TRUE(res.found);
  EXPECT_EQ(res.layout, stored_layout());
  ASSERT_EQ(res.thetas.size(), 8u);
  for (int n = 1; n <= 8; ++n) EXPECT_LE(angle_gap_mod_pi(res.thetas[n - 1], -kPi / (2.0 * n)), 1e-10);
  EXPECT_GT(res.candidates_examined, 0u);
}

TEST(Search, NoLayoutWithFiveSingleQubitGates) {
  SearchOptions opt;
  opt.max_single = 5;
  EXPECT_FALSE(search_decomposition(opt).found);
}

}  // namespace
}  // namespace qhomog::circuit
