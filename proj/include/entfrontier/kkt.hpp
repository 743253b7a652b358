/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <string>

#include "entfrontier/channels.hpp"
#include "entfrontier/state.hpp"

namespace entfrontier {

/// Nonlocality value separating the mixed and pure branches of the
/// REE-vs-nonlocality upper boundary family.
inline constexpr double kUpperBoundaryKink = 0.81686;

/// First-order extremality report for a rank-2 state rho with closest
/// separable state sigma under a nonlocality constraint.
///
/// The conditions are evaluated in natural-log units (gamma = 1/log2 e
/// converts the REE from bits): with rho = l1|e1><e1| + l2|e2><e2|,
///   <e1|ln sigma|e2> = l <e1|Bop|e2>                            (cond0)
///   gamma E_R + l beta = ln l_i - <e_i|ln sigma|e_i> + l <e_i|Bop|e_i>,
/// where beta = 2 sqrt(M), and the slack operator
///   X = ln rho - ln sigma + P + l Bop - (gamma E_R + 1 + l beta) I
/// must satisfy X >= 0 and tr(X rho) = 0. Logarithms of rank-deficient
/// operators are taken on their support.
struct KktReport {
  double multiplier_l = 0.0;
  double beta = 0.0;
  double gamma = 0.0;  // 1/log2(e) = ln 2
  Mat4 slack = Mat4::Zero();
  double min_eig_x = 0.0;
  double cond0_residual = 0.0;
  double cond1_residual = 0.0;
  double trace_x_rho = 0.0;
  bool passed = false;

  std::string to_json() const;
};

/// Throws RankError unless rho has exactly two eigenvalues above 1e-10.
KktReport kkt_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                    const Mat4& bell_op);

/// CHSH operator eta [-s3 x s3 + (2p-1) s1 x s1] that is optimal for the
/// rank-2 Bell-diagonal state p psi+ + (1-p) psi-.
Mat4 chsh_op_bell_diagonal(double p);

/// Piecewise-optimal CHSH operator for the amplitude-damped state
/// rho_A(alpha, p); expectation equals 2 sqrt(M) on the family.
Mat4 chsh_op_adc(double alpha, double p);

/// A boundary-family member at nonlocality B, its parameters and REE.
struct BoundaryPoint {
  double nonlocality = 0.0;
  double p = 0.0;
  double alpha = 0.5;  // ADC parameter; 1/2 for the Bell-diagonal family
  DensityMatrix state;
  double ree = 0.0;
  /// Upper family at the kink: every p between (2 + sqrt(2 + 2 B^2))/4 and 1
  /// is admissible; the returned point uses p = 1.
  bool p_interval = false;
};

/// Upper-boundary (amplitude-damped) family:
/// p = (2 + sqrt(2 + 2 B^2))/4 below the kink, p = 1 above it;
/// alpha = (p - sqrt(5 p^2 - 4 p - B^2)) / (2 p).
BoundaryPoint a2_params(double b);

/// Lower-boundary (Bell-diagonal) family: p = (1 + B)/2,
/// E_R = 1 - h((1 + B)/2).
BoundaryPoint d_params(double b);

/// Extremality report of a lower-family point against its known CSS
/// (psi+/psi- mixture of weight 1/2 each) and Bell operator.
KktReport kkt_check_lower_family(double b);

/// Extremality report of an upper-family point against its constructed CSS.
/// The family sits on the fully degenerate stratum of the correlation
/// matrix (T^T T proportional to identity), so the constraint gradient is a
/// subdifferential; the report of its most favorable symmetric member is
/// returned. Throws RankError on the pure branch (B past the kink).
KktReport kkt_check_upper_family(double b);

}  // namespace entfrontier
