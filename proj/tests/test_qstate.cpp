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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qhomog/qstate.hpp"

namespace qhomog {
namespace {

ComplexMatrix pauli_x() { return Eigen::Matrix2cd{{0.0, 1.0}, {1.0, 0.0}}; }

DensityMatrix bell_phi_plus() {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(4);
  ket(0) = 1.0;
  ket(3) = 1.0;
  return states::from_ket(ket);
}

TEST(Kron, IdentityTimesIdentity) {
  EXPECT_TRUE(approx_equal(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(4, 4), 0.0));
}

TEST(Kron, DiagonalProjectors) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(1, 1) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  EXPECT_TRUE(approx_equal(kron(a, b), expected, 0.0));
}

TEST(Kron, AssociativeOnEightByEight) {
  const ComplexMatrix x = pauli_x();
  const ComplexMatrix left = kron(kron(x, x), ComplexMatrix::Identity(2, 2));
  const ComplexMatrix right = kron(x, kron(x, ComplexMatrix::Identity(2, 2)));
  ASSERT_EQ(left.rows(), 8);
  ASSERT_EQ(left.cols(), 8);
  EXPECT_TRUE(approx_equal(left, right, 0.0));
  EXPECT_TRUE(approx_equal(left, oracle::kron(oracle::kron(x, x), ComplexMatrix::Identity(2, 2)), 0.0));
}

TEST(Kron, MatchesElementwiseOracleOnRandomOperands) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_density(2, seed).matrix();
    const auto b = random_density(4, seed + 100).matrix();
    EXPECT_TRUE(approx_equal(kron(a, b), oracle::kron(a, b), 0.0));
  }
}

TEST(Kron, RejectsEmptyOperand) { EXPECT_THROW(kron(ComplexMatrix(0, 0), ComplexMatrix::Identity(2, 2)), DimensionError); }

TEST(PartialTrace, ProductStateFactorizes) {
  const auto rho = random_density(2, 1);
  const auto sigma = random_density(4, 2);
  const auto joint = kron(rho, sigma);
  EXPECT_TRUE(approx_equal(partial_trace(joint, 2, 4, Keep::A).matrix(), rho.matrix(), 1e-12));
  EXPECT_TRUE(approx_equal(partial_trace(joint, 2, 4, Keep::B).matrix(), sigma.matrix(), 1e-12));
}

TEST(PartialTrace, BellStateMarginalIsMaximallyMixed) {
  const auto m = partial_trace(bell_phi_plus(), 2, 2, Keep::A);
  EXPECT_TRUE(approx_equal(m.matrix(), ComplexMatrix::Identity(2, 2) / 2.0, 1e-15));
  EXPECT_NEAR(std::abs(m.matrix().trace() - Complex{1.0, 0.0}), 0.0, 1e-15);
  EXPECT_TRUE(m.is_valid());
}

TEST(PartialTrace, MatchesProjectorOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto rho = random_density(8, seed);
    EXPECT_TRUE(approx_equal(partial_trace(rho, 2, 4, Keep::A).matrix(), oracle::trace_out_second(rho.matrix(), 2, 4), 1e-14));
    EXPECT_TRUE(approx_equal(partial_trace(rho, 2, 4, Keep::B).matrix(), oracle::trace_out_first(rho.matrix(), 2, 4), 1e-14));
  }
}

TEST(PartialTrace, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace(random_density(4, 3), 2, 4, Keep::A), DimensionError);
}

TEST(PartialTrace, QubitMarginalAgreesWithBipartiteTrace) {
  const auto rho = random_density(8, 9);
  const std::array<std::size_t, 1> first{0};
  EXPECT_TRUE(approx_equal(reduce_to_qubits(rho.matrix(), 3, first), partial_trace(rho, 2, 4, Keep::A).matrix(), 1e-14));
  // last qubit of a product state
  const auto a = random_density(2, 10), b = random_density(2, 11), c = random_density(2, 12);
  const auto prod = kron(kron(a, b), c);
  EXPECT_TRUE(approx_equal(qubit_marginal(prod.matrix(), 3, 1), b.matrix(), 1e-14));
  EXPECT_TRUE(approx_equal(qubit_marginal(prod.matrix(), 3, 2), c.matrix(), 1e-14));
  // reordered keep list transposes the tensor factors
  const std::array<std::size_t, 2> reversed{2, 0};
  EXPECT_TRUE(approx_equal(reduce_to_qubits(prod.matrix(), 3, reversed), kron(c.matrix(), a.matrix()), 1e-14));
}

TEST(L2Distance, ClosedFormValues) {
  EXPECT_EQ(l2_distance(states::zero(), states::zero()), 0.0);
  EXPECT_NEAR(l2_distance(states::zero(), states::one()), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(l2_distance(states::zero(), states::maximally_mixed()), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(L2Distance, DimensionMismatchThrows) {
  EXPECT_THROW(l2_distance(states::zero(), states::maximally_mixed(4)), DimensionError);
}

TEST(L2Distance, TriangleInequalityOnRandomTriples) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto a = random_density(2, 3 * seed), b = random_density(2, 3 * seed + 1), c = random_density(2, 3 * seed + 2);
    EXPECT_LE(l2_distance(a, c), l2_distance(a, b) + l2_distance(b, c) + 1e-12);
    EXPECT_EQ(l2_distance(a, b), l2_distance(b, a));
  }
}

TEST(Fidelity, ClosedFormValues) {
  EXPECT_NEAR(fidelity(states::plus(), states::plus()), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(states::zero(), states::one()), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(states::zero(), states::maximally_mixed()), 0.5, 1e-12);
  const auto r = random_density(4, 5);
  EXPECT_NEAR(fidelity(r, r), 1.0, 1e-10);
}

TEST(Fidelity, SymmetricOnRandomPairs) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto a = random_density(2, 2 * seed), b = random_density(2, 2 * seed + 1);
    const double f = fidelity(a, b);
    EXPECT_NEAR(f, fidelity(b, a), 1e-10);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
}

TEST(Fidelity, QubitClosedFormAgreesWithEigendecompositionRoute) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = random_density(2, 7 * seed), b = random_density(2, 7 * seed + 3);
    EXPECT_NEAR(fidelity(a, b), detail::uhlmann_fidelity_eig(a.matrix(), b.matrix()), 1e-10);
  }
}

TEST(Fidelity, PureReferenceIsExact) {
  // F(rho, |psi><psi|) = <psi|rho|psi>
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = random_density(2, seed);
    EXPECT_NEAR(fidelity(a, states::plus()), 0.5 * (a.matrix().sum()).real(), 1e-14);
  }
}

TEST(Fidelity, OverlapVariantMatchesPureStateOverlap) {
  EXPECT_NEAR(fidelity(states::zero(), states::plus(), FidelityKind::Overlap), 0.5, 1e-15);
  EXPECT_NEAR(fidelity(states::zero(), states::plus(), FidelityKind::Uhlmann), 0.5, 1e-12);
}

TEST(Fidelity, RejectsNonPsdAndMismatchedInputs) {
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(fidelity(DensityMatrix::unchecked(bad), states::zero()), DomainError);
  EXPECT_THROW(fidelity(states::zero(), states::maximally_mixed(4)), DimensionError);
}

TEST(DensityMatrix, ConstructorRejectsInvalidMatrices) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(2, 2)), DomainError);             // trace 2
  EXPECT_THROW(DensityMatrix(ComplexMatrix::Identity(3, 3) / 3.0), DomainError);       // not 2^k
  ComplexMatrix nonherm = ComplexMatrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{nonherm}, DomainError);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  EXPECT_THROW(DensityMatrix{neg}, DomainError);
}

TEST(DensityMatrix, BlochConstruction) {
  EXPECT_TRUE(approx_equal(states::from_bloch(0, 0, 1).matrix(), states::zero().matrix(), 0.0));
  EXPECT_TRUE(approx_equal(states::from_bloch(1, 0, 0).matrix(), states::plus().matrix(), 0.0));
  EXPECT_THROW(states::from_bloch(0.8, 0.8, 0.0), DomainError);
  const auto ev = hermitian_eigenvalues(states::from_bloch(0.6, 0, 0).matrix());
  EXPECT_NEAR(ev(0), 0.2, 1e-15);
  EXPECT_NEAR(ev(1), 0.8, 1e-15);
  const auto b = bloch_vector(states::from_bloch(0.1, -0.2, 0.3).matrix());
  EXPECT_NEAR(b[0], 0.1, 1e-15);
  EXPECT_NEAR(b[1], -0.2, 1e-15);
  EXPECT_NEAR(b[2], 0.3, 1e-15);
}

TEST(RandomDensity, DeterministicPerSeed) {
  EXPECT_TRUE(approx_equal(random_density(4, 42).matrix(), random_density(4, 42).matrix(), 0.0));
  EXPECT_FALSE(approx_equal(random_density(4, 42).matrix(), random_density(4, 43).matrix(), 1e-6));
}

TEST(RandomDensity, InvariantSweepOverTenThousandSeeds) {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const std::size_t dim = seed % 3 == 0 ? 4 : 2;
    const auto rho = random_density(dim, seed);
    ASSERT_TRUE(rho.is_valid()) << "seed " << seed;
    if (dim == 2) {
      const auto ev = hermitian_eigenvalues(rho.matrix());
      ASSERT_GE(ev(0), -1e-12);
      ASSERT_LE(ev(1), 1.0 + 1e-12);
      ASSERT_NEAR(ev.sum(), 1.0, 1e-12);
    }
  }
}

TEST(RandomDensity, RejectsBadDimensions) {
  EXPECT_THROW(random_density(1, 0), DimensionError);
  EXPECT_THROW(random_density(6, 0), DimensionError);
}

TEST(PartialTrace, KronFactorizationPropertyOnRandomStates) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto rho = random_density(2, seed);
    const auto sigma = random_density(2, seed + 1000);
    const auto back = partial_trace(kron(rho, sigma), 2, 2, Keep::A);
    EXPECT_TRUE(approx_equal(back.matrix(), rho.matrix(), 1e-12));
    EXPECT_TRUE(back.is_valid());
  }
}

}  // namespace
}  // namespace qhomog
