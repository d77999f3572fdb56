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

// Dense density-matrix primitives.
//
// Basis convention: a register of qubits q0 q1 ... q(n-1) is indexed with q0
// as the most significant bit, so |q0 q1> = |2*q0 + q1>. Matrices are indexed
// logically as (row, col); storage order is Eigen's default.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qhomog/errors.hpp"
#include "qhomog/rng.hpp"

namespace qhomog {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

struct Tolerances {
  double hermitian = 1e-10;
  double trace = 1e-10;
  double psd_floor = 1e-10;
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t qubit_count(std::size_t dim) {
  if (!is_power_of_two(dim)) throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  std::size_t q = 0;
  while ((std::size_t{1} << q) < dim) ++q;
  return q;
}

// Largest elementwise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("max_abs_diff: shape mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-12) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

inline Complex trace(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("trace of non-square matrix");
  return m.trace();
}

// Eigenvalues of the Hermitian part, ascending.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Returns a description of the first violated density-matrix invariant, if any.
inline std::optional<std::string> density_violation(const ComplexMatrix& m, const Tolerances& tol = {}) {
  if (m.rows() == 0 || m.rows() != m.cols()) return "matrix is empty or not square";
  if (!is_power_of_two(static_cast<std::size_t>(m.rows()))) return "dimension is not a power of two";
  if (!m.allFinite()) return "non-finite entry";
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol.hermitian) return "not Hermitian (deviation " + std::to_string(herm) + ")";
  const double tr_err = std::abs(m.trace() - Complex{1.0, 0.0});
  if (tr_err > tol.trace) return "trace differs from 1 by " + std::to_string(tr_err);
  const double min_eig = hermitian_eigenvalues(m)(0);
  if (min_eig < -tol.psd_floor) return "negative eigenvalue " + std::to_string(min_eig);
  return std::nullopt;
}

// Hermitian, unit-trace, positive semidefinite matrix of power-of-two dimension.
class DensityMatrix {
 public:
  // Validates; throws DomainError on any invariant violation.
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = {}) : m_(std::move(m)) {
    if (auto why = density_violation(m_, tol)) throw DomainError("invalid density matrix: " + *why);
  }

  // Wraps a matrix produced by a state-preserving operation (unitary
  // conjugation, partial trace, convex mixing of valid states). Only cheap
  // shape checks run here; callers needing the full check use validate().
  static DensityMatrix unchecked(ComplexMatrix m) {
    if (m.rows() == 0 || m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows())))
      throw DimensionError("density matrix must be square with power-of-two dimension");
    return DensityMatrix(std::move(m), UncheckedTag{});
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t qubits() const { return qubit_count(dim()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  std::optional<std::string> violation(const Tolerances& tol = {}) const { return density_violation(m_, tol); }
  bool is_valid(const Tolerances& tol = {}) const { return !violation(tol).has_value(); }

  // Throws InvariantError; used on outputs, where a violation is a bug.
  const DensityMatrix& validate(const Tolerances& tol = {}) const {
    if (auto why = violation(tol)) throw InvariantError("density matrix invariant violated: " + *why);
    return *this;
  }

 private:
  struct UncheckedTag {};
  DensityMatrix(ComplexMatrix m, UncheckedTag) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) throw DimensionError("kron: empty operand");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::unchecked(kron(a.matrix(), b.matrix()));
}

enum class Keep { A, B };

// Bipartite partial trace of an operator on A (x) B.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  if (da == 0 || db == 0 || m.rows() != da * db || m.cols() != da * db)
    throw DimensionError("partial_trace: dims " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                         " do not match matrix of size " + std::to_string(m.rows()));
  if (keep == Keep::A) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j)
      for (Eigen::Index k = 0; k < da; ++k) out(i, j) += m(k * db + i, k * db + j);
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  return DensityMatrix::unchecked(partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

// Marginal on the listed qubits (in the listed order) of an n-qubit operator.
inline ComplexMatrix reduce_to_qubits(const ComplexMatrix& m, std::size_t n_qubits, std::span<const std::size_t> keep) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (static_cast<std::size_t>(m.rows()) != dim || m.rows() != m.cols())
    throw DimensionError("reduce_to_qubits: matrix is not " + std::to_string(n_qubits) + "-qubit");
  std::vector<bool> kept(n_qubits, false);
  for (auto w : keep) {
    if (w >= n_qubits) throw DimensionError("reduce_to_qubits: wire " + std::to_string(w) + " out of range");
    if (kept[w]) throw DimensionError("reduce_to_qubits: wire listed twice");
    kept[w] = true;
  }
  std::vector<std::size_t> traced;
  for (std::size_t w = 0; w < n_qubits; ++w)
    if (!kept[w]) traced.push_back(w);

  auto bit = [n_qubits](std::size_t wire) { return std::size_t{1} << (n_qubits - 1 - wire); };
  // Scatter a local index (over the given wires, first wire most significant) into a global index.
  auto scatter = [&](std::size_t local, std::span<const std::size_t> wires) {
    std::size_t g = 0;
    for (std::size_t i = 0; i < wires.size(); ++i)
      if (local & (std::size_t{1} << (wires.size() - 1 - i))) g |= bit(wires[i]);
    return g;
  };

  const std::size_t dk = std::size_t{1} << keep.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  std::vector<std::size_t> keep_idx(dk), trace_idx(dt);
  for (std::size_t i = 0; i < dk; ++i) keep_idx[i] = scatter(i, keep);
  for (std::size_t i = 0; i < dt; ++i) trace_idx[i] = scatter(i, traced);

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < dt; ++t)
        acc += m(static_cast<Eigen::Index>(keep_idx[r] | trace_idx[t]), static_cast<Eigen::Index>(keep_idx[c] | trace_idx[t]));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  return out;
}

inline ComplexMatrix qubit_marginal(const ComplexMatrix& m, std::size_t n_qubits, std::size_t wire) {
  const std::array<std::size_t, 1> keep{wire};
  return reduce_to_qubits(m, n_qubits, keep);
}

// Frobenius (Hilbert-Schmidt) distance.
inline double l2_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("l2_distance: dimension mismatch");
  return (a - b).norm();
}

inline double l2_distance(const DensityMatrix& a, const DensityMatrix& b) { return l2_distance(a.matrix(), b.matrix()); }

// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues are clamped.
inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const RealVector roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

namespace detail {

// Uhlmann fidelity through Hermitian eigendecompositions; any dimension.
inline double uhlmann_fidelity_eig(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  const ComplexMatrix root = sqrt_psd(rho);
  const ComplexMatrix inner = root * sigma * root;
  const RealVector ev = hermitian_eigenvalues(inner).cwiseMax(0.0);
  const double t = ev.cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

}  // namespace detail

enum class FidelityKind {
  Uhlmann,  // (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
  Overlap,  // tr(rho sigma); equals |<psi|phi>|^2 on pure states
};

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma, FidelityKind kind = FidelityKind::Uhlmann) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Tolerances tol{};
  for (const auto* s : {&rho, &sigma})
    if (auto why = s->violation(tol)) throw DomainError("fidelity: invalid input state: " + *why);
  if (kind == FidelityKind::Overlap) {
    const double f = (rho.matrix() * sigma.matrix()).trace().real();
    return std::clamp(f, 0.0, 1.0);
  }
  if (rho.dim() == 2) {
    // Qubit closed form; exact whenever either state is pure.
    const double det_r = std::max(0.0, rho.matrix().determinant().real());
    const double det_s = std::max(0.0, sigma.matrix().determinant().real());
    const double f = (rho.matrix() * sigma.matrix()).trace().real() + 2.0 * std::sqrt(det_r * det_s);
    return std::clamp(f, 0.0, 1.0);
  }
  return detail::uhlmann_fidelity_eig(rho.matrix(), sigma.matrix());
}

// Hilbert-Schmidt ensemble: G G^dagger / tr(G G^dagger) with complex Ginibre G.
inline DensityMatrix random_density(std::size_t dim, std::uint64_t seed) {
  if (dim < 2 || !is_power_of_two(dim)) throw DimensionError("random_density: dim must be a power of two >= 2");
  Rng rng(seed, {0x5eedULL, dim});
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = Complex{re, im};
    }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityMatrix(std::move(m));
}

namespace states {

inline DensityMatrix from_ket(const Eigen::VectorXcd& ket) {
  const double n = ket.norm();
  if (n == 0.0) throw DomainError("from_ket: zero vector");
  const Eigen::VectorXcd v = ket / n;
  return DensityMatrix(v * v.adjoint());
}

inline DensityMatrix zero() { return DensityMatrix(Eigen::Matrix2cd{{1.0, 0.0}, {0.0, 0.0}}); }
inline DensityMatrix one() { return DensityMatrix(Eigen::Matrix2cd{{0.0, 0.0}, {0.0, 1.0}}); }
inline DensityMatrix plus() { return DensityMatrix(Eigen::Matrix2cd{{0.5, 0.5}, {0.5, 0.5}}); }
inline DensityMatrix minus() { return DensityMatrix(Eigen::Matrix2cd{{0.5, -0.5}, {-0.5, 0.5}}); }

inline DensityMatrix maximally_mixed(std::size_t dim = 2) {
  if (!is_power_of_two(dim)) throw DimensionError("maximally_mixed: dim must be a power of two");
  const auto d = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(dim));
}

// (I + x X + y Y + z Z) / 2; z = +1 is |0>.
inline DensityMatrix from_bloch(double x, double y, double z) {
  const double r2 = x * x + y * y + z * z;
  if (!(r2 <= 1.0 + 1e-12)) throw DomainError("Bloch vector norm exceeds 1");
  Eigen::Matrix2cd m;
  m << Complex{0.5 * (1.0 + z), 0.0}, Complex{0.5 * x, -0.5 * y}, Complex{0.5 * x, 0.5 * y}, Complex{0.5 * (1.0 - z), 0.0};
  return DensityMatrix(m);
}

// Product state of identical copies.
inline DensityMatrix tensor_power(const DensityMatrix& s, std::size_t copies) {
  if (copies == 0) throw DimensionError("tensor_power: zero copies");
  ComplexMatrix m = s.matrix();
  for (std::size_t i = 1; i < copies; ++i) m = kron(m, s.matrix());
  return DensityMatrix::unchecked(std::move(m));
}

}  // namespace states

inline std::array<double, 3> bloch_vector(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("bloch_vector: expected a 2x2 matrix");
  return {2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

}  // namespace qhomog
