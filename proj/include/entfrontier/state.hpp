/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "entfrontier/errors.hpp"

namespace entfrontier {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;

// Basis order is fixed to |00>, |01>, |10>, |11| throughout; the first
// index is qubit 1, the second qubit 2.

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD.
/// Immutable after construction.
class DensityMatrix {
public:
  /// Maximally mixed state.
  DensityMatrix() : m_(Mat4::Identity() * 0.25) {}

  /// Throws NotHermitian / NotUnitTrace / NotPSD; never renormalizes.
  explicit DensityMatrix(const Mat4& m);

  const Mat4& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

private:
  Mat4 m_;
};

/// Functional form of the DensityMatrix constructor.
DensityMatrix validate_density(const Mat4& m);

/// Normalized two-qubit pure state a|00> + b|01> + c|10> + d|11>.
struct PureState {
  Complex a, b, c, d;

  PureState(Complex a, Complex b, Complex c, Complex d);

  CVec4 ket() const;
  DensityMatrix density() const;

  /// sqrt(alpha)|01> + sqrt(1-alpha)|10>
  static PureState psi_alpha(double alpha);
  static PureState psi_plus();   // (|01> + |10>)/sqrt(2)
  static PureState psi_minus();  // (|01> - |10>)/sqrt(2)
  static PureState phi_plus();   // (|00> + |11>)/sqrt(2)
  static PureState phi_minus();  // (|00> - |11>)/sqrt(2)
};

/// Local Bloch vectors and 3x3 correlation matrix:
/// x_i = tr[rho (s_i x I)], y_i = tr[rho (I x s_i)], t_ij = tr[rho (s_i x s_j)].
struct BlochForm {
  Vec3 x = Vec3::Zero();
  Vec3 y = Vec3::Zero();
  Mat3 t = Mat3::Zero();
};

BlochForm to_bloch(const DensityMatrix& rho);

/// Inverse of to_bloch; validates the reconstructed matrix before returning.
DensityMatrix from_bloch(const BlochForm& b);

/// Transpose over the second qubit. Preserves Hermiticity and trace exactly.
Mat4 partial_transpose(const Mat4& m);
Mat4 partial_transpose(const DensityMatrix& rho);

/// Eigenvalues sorted descending with matching orthonormal eigenvector columns.
struct Spectrum {
  Vec4 eigenvalues;
  Mat4 eigenvectors;
};

Spectrum spectrum(const Mat4& hermitian);
Spectrum spectrum(const DensityMatrix& rho);

/// S(rho||sigma) = tr(rho log2 rho - rho log2 sigma) in bits.
/// 0*log 0 := 0 on rho's kernel; +infinity when supp(rho) is not contained
/// in supp(sigma) (eigenvalue support threshold 1e-12).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Von Neumann entropy in bits; in [0,2] for two-qubit states.
double von_neumann_entropy(const DensityMatrix& rho);

/// Reduced state of the given qubit (1 or 2); traces out the other one.
Mat2 reduced_state(const DensityMatrix& rho, int qubit);

/// Hilbert-Schmidt-style rank-r sample: rho = G G^dagger / tr(G G^dagger)
/// with G a 4 x rank complex Gaussian matrix. Deterministic per seed.
DensityMatrix sample_state(std::uint64_t seed, int rank);

/// Rank-stratified mixture sample with weights
/// {rank1: 0.1, rank2: 0.3, rank3: 0.2, rank4: 0.4}. Deterministic per seed.
DensityMatrix sample_mixture(std::uint64_t seed);

/// Haar-like random pure state (normalized complex Gaussian amplitudes).
PureState sample_pure(std::uint64_t seed);

/// Pauli matrix s_i, i in {1,2,3}.
const Mat2& pauli(int i);
Mat4 kron(const Mat2& a, const Mat2& b);

// ---------------------------------------------------------------------------
// State file format: {"re": [[...4x4...]], "im": [[...4x4...]]}, row-major.
// Loading validates the matrix.

DensityMatrix parse_state_json(const std::string& text);
std::string state_to_json(const DensityMatrix& rho);
DensityMatrix load_state_json(const std::string& path);
void save_state_json(const std::string& path, const DensityMatrix& rho);

}  // namespace entfrontier
