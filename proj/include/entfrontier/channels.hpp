/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <vector>

#include "entfrontier/measures.hpp"
#include "entfrontier/state.hpp"

namespace entfrontier {

/// Single-qubit Kraus channel; the constructor enforces the completeness
/// relation sum E_i^dagger E_i = I within 1e-12.
struct KrausChannel {
  std::vector<Mat2> operators;
  double damping = 0.0;  // q in [0,1]

  KrausChannel(std::vector<Mat2> ops, double q);
};

/// Amplitude damping: E0 = |0><0| + sqrt(1-q)|1><1|, E1 = sqrt(q)|0><1|.
KrausChannel adc_kraus(double q);

/// Phase damping: E0 = |0><0| + sqrt(1-q)|1><1|, E1 = sqrt(q)|1><1|.
KrausChannel pdc_kraus(double q);

/// Channel on both qubits: sum_ij (E_i x F_j) rho (E_i x F_j)^dagger.
DensityMatrix apply_two_side(const KrausChannel& ch1, const KrausChannel& ch2,
                             const DensityMatrix& rho_in);

/// Channel on qubit 1 only: sum_i (E_i x I) rho (E_i x I)^dagger.
DensityMatrix apply_one_side(const KrausChannel& ch, const DensityMatrix& rho_in);

/// Amplitude-damped state p |psi_a'><psi_a'| + (1-p) |00><00|.
struct AdcState {
  double alpha_eff = 0.0;  // alpha'
  double p = 0.0;          // effective survival, q = 1 - p
  /// Total damping (p = 0): the state is |00><00| and alpha' is immaterial;
  /// it is fixed to 0 and this flag is set.
  bool alpha_degenerate = false;
  DensityMatrix rho;
};

/// Direct (alpha', p) parametrization of the amplitude-damped family.
AdcState adc_state(double alpha_eff, double p);

/// Closed form of |psi_alpha> sent through one- or two-sided amplitude
/// damping with coefficients q1, q2:
/// q = alpha q2 + (1-alpha) q1, alpha' = alpha p2 / (alpha p2 + (1-alpha) p1).
AdcState adc_closed_form(double alpha, double q1, double q2);

/// Phase-damped state: alpha|01><01| + (1-alpha)|10><10|
/// + y (|01><10| + |10><01|) with y = sqrt(alpha (1-alpha) p1 p2).
struct PdcState {
  double alpha = 0.0;
  double y = 0.0;
  double alpha_eff = 0.0;  // alpha''
  double p_eff = 0.0;      // p'' = 1 - alpha (1 - p1 p2)
  DensityMatrix rho;
};

PdcState pdc_closed_form(double alpha, double q1, double q2);

/// Closed-form measures of an amplitude-damped state; with
/// x = 4 (1-a') a' p^2:
///   B = sqrt(max{0, max[x, (1-2p)^2] + x - 1}),
///   N = sqrt((1-p)^2 + x) - (1-p),  C = sqrt(x).
MeasureSet adc_measures(const AdcState& s);

/// Coefficient matrix of a state in the Bell basis
/// b1 = psi-, b2 = psi+, b3 = phi-, b4 = phi+.
struct BellBasisForm {
  Mat4 coefficients;

  double r_minus() const { return coefficients(0, 0).real(); }  // on b1
  double r_plus() const { return coefficients(1, 1).real(); }   // on b2
  double r() const { return coefficients(2, 2).real(); }        // on b3, b4
  Complex t() const { return coefficients(1, 0); }              // b2><b1 term

  Mat4 reconstruct() const;
};

BellBasisForm bell_basis_decompose(const DensityMatrix& rho);

/// Columns are the Bell kets b1..b4 in the computational basis.
const Mat4& bell_basis();

}  // namespace entfrontier
