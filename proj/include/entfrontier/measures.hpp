/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include "entfrontier/state.hpp"

namespace entfrontier {

/// Closed-form entanglement and nonlocality measures of a two-qubit state.
/// The nonlocality degree B = sqrt(max(0, M - 1)) is normalized so that
/// B = C = N on pure states.
struct MeasureSet {
  double concurrence = 0.0;   // C in [0,1]
  double negativity = 0.0;    // N in [0,1]
  double horodecki_m = 0.0;   // M in [0,2]
  double nonlocality = 0.0;   // B in [0,1]
  double purity = 0.25;       // tr(rho^2) in [1/4,1]
};

/// Wootters concurrence max{0, 2 l_max - sum l_j} from the spin-flipped
/// spectrum. The l_j are computed through the Hermitian similarity
/// sqrt(rho) rho~ sqrt(rho) so the spectrum is real and non-negative.
double concurrence(const DensityMatrix& rho);

/// max{0, -2 min eig(rho^PT)} where PT transposes the second qubit.
double negativity(const DensityMatrix& rho);

/// Sum of the two largest eigenvalues of U = T^T T.
double horodecki_m(const DensityMatrix& rho);

/// B = sqrt(max(0, M - 1)); zero iff the CHSH inequality is satisfied.
double nonlocality_b(const DensityMatrix& rho);

/// Nonlocality of a Bell-diagonal state with probabilities l1..l4 over
/// the Bell kets psi-, psi+, phi-, phi+:
/// sqrt(max{0, 2 max_cyc[(l_i-l_j)^2 + (l_k-l_4)^2] - 1}).
double bell_diagonal_b(double l1, double l2, double l3, double l4);

double purity(const DensityMatrix& rho);

MeasureSet measure_set(const DensityMatrix& rho);

/// CHSH operator a.s x (b+b').s + a'.s x (b-b').s built from the top-two
/// eigenvectors of U = T^T T, so that tr(rho op) = 2 sqrt(M(rho)).
struct ChshOperator {
  Mat4 op;
  Vec3 a, a_prime, b, b_prime;
  /// Top-two eigenvalues of U coincide within 1e-12: the eigenbasis choice
  /// is arbitrary but the returned operator is still optimal.
  bool degenerate = false;
};

ChshOperator chsh_operator(const DensityMatrix& rho);

/// Binary entropy h(x) = -x log2 x - (1-x) log2(1-x), h(0) = h(1) = 0.
/// Throws DomainError outside [0,1] beyond 1e-12.
double binary_entropy(double x);

/// Wootters function W(B) = h((1 + sqrt(1 - B^2))/2); the pure-state
/// relative entropy of entanglement at measure value B.
double wootters_w(double b);

}  // namespace entfrontier
