/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entfrontier/channels.hpp"
#include "entfrontier/state.hpp"

namespace entfrontier {

enum class CssMethod { pure, bell_diagonal, horodecki, gen_horodecki, v_state, numeric };

const char* to_string(CssMethod m);

/// Closest separable state sigma together with the relative entropy of
/// entanglement E_R = S(rho||sigma) in bits and the route that produced it.
/// sigma is always PPT.
struct CssSolution {
  DensityMatrix sigma;
  double ree = 0.0;
  CssMethod method = CssMethod::numeric;
};

/// Pure-state REE: E_R = W(2|ad - bc|); sigma is the state dephased in its
/// Schmidt basis.
CssSolution ree_pure(const PureState& psi);

/// Bell-diagonal REE: 0 when max l <= 1/2 (separable), otherwise
/// E_R = 1 - h(max l) with the boundary mixture as CSS.
CssSolution ree_bell_diagonal(double l1, double l2, double l3, double l4);

/// Closed form (p - 2) log2(1 - p/2) + (1 - p) log2(1 - p).
double ree_horodecki_value(double p);

/// REE of p |psi+><psi+| + (1-p)|00><00|; CSS from the general
/// amplitude-damped construction at alpha = 1/2.
CssSolution ree_horodecki(double p);

/// Closest separable state of the amplitude-damped state
/// rho = p |psi_alpha><psi_alpha| + (1-p)|00><00|:
///   sigma = R1|00><00| + R2|01><01| + R3|10><10| + R4|11><11|
///           + sqrt(R1 R4) (|01><10| + |10><01|)
/// with R4 = R1 - 1 + p and R1 fixed by a transcendental equation solved by
/// bracketed bisection (residual <= 1e-10).
struct GenHorodeckiCss {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double lambda_plus = 0.0, lambda_minus = 0.0;
  CVec4 ket_plus = CVec4::Zero(), ket_minus = CVec4::Zero();
  double z = 0.0;      // sqrt((R2 - R3)^2 + 4 R1 R4)
  double log_ratio = 0.0;  // L = ln(R2 + R3 - z) - ln(R2 + R3 + z)
  double delta = 0.0;
  double residual = 0.0;
  CssSolution solution;
};

/// Throws RootBracketFailure when no sign change is found and
/// NonPhysicalCss when a coefficient comes out negative.
GenHorodeckiCss css_gen_horodecki(double alpha, double p);

/// REE of the rank-2 state B'|psi+><psi+| + (1-B')|01><01| with
/// B' = 2(1 - alpha'), alpha' in [1/2, 1]; the CSS is
/// (1 - B'/2)|01><01| + (B'/2)|10><10|.
CssSolution ree_v_state(double alpha_eff);

struct ReeConfig {
  int starts = 8;
  int max_iter = 2000;
  double tol = 1e-6;  // objective stall threshold (bits)
  std::uint64_t seed = 20240901;
  bool use_family_start = true;  // seed with the detected family CSS
  bool record_trace = false;
  bool throw_on_failure = true;
};

struct ReeDiagnostics {
  std::vector<double> objective_trace;  // incumbent per accepted step, best start
  int iterations = 0;
  int best_start = -1;
  bool converged = true;
  std::string to_json() const;
};

/// Projected-descent minimization of S(rho||sigma) over the PPT density
/// matrices (equal to the separable set for two qubits): gradient from the
/// first divided difference of log on sigma's spectrum, feasibility restored
/// by alternating projection, backtracking line search from step 1, best of
/// several starts. A PPT input short-circuits to E_R = 0 with sigma = rho.
CssSolution ree_numeric(const DensityMatrix& rho, const ReeConfig& config = {},
                        ReeDiagnostics* diagnostics = nullptr);

/// Structural family detection (pattern match on matrix entries at 1e-10):
/// routes to a closed form when the state is pure, Bell-diagonal,
/// (generalized) Horodecki or of the V form, and to ree_numeric otherwise.
CssSolution ree(const DensityMatrix& rho);

CssMethod detect_family(const DensityMatrix& rho);

}  // namespace entfrontier
