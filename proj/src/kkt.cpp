/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/kkt.hpp"

#include <cmath>
#include <sstream>

#include "entfrontier/measures.hpp"
#include "entfrontier/ree.hpp"

namespace entfrontier {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kSupportTol = 1e-12;
constexpr double kPassTol = 1e-8;

// Logarithm on the support; kernel directions contribute zero.
Mat4 support_log(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  Mat4 out = Mat4::Zero();
  for (int i = 0; i < 4; ++i) {
    const double v = es.eigenvalues()(i);
    if (v > kSupportTol)
      out += std::log(v) *
             (es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint());
  }
  return out;
}

}  // namespace

std::string KktReport::to_json() const {
  std::ostringstream os;
  os.precision(12);
  os << "{\"passed\": " << (passed ? "true" : "false")
     << ", \"multiplier_l\": " << multiplier_l << ", \"beta\": " << beta
     << ", \"gamma\": " << gamma << ", \"min_eig_x\": " << min_eig_x
     << ", \"cond0_residual\": " << cond0_residual
     << ", \"cond1_residual\": " << cond1_residual
     << ", \"trace_x_rho\": " << trace_x_rho << ", \"slack_re\": [";
  for (int r = 0; r < 4; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < 4; ++c) os << (c ? ", " : "") << slack(r, c).real();
    os << "]";
  }
  os << "], \"slack_im\": [";
  for (int r = 0; r < 4; ++r) {
    os << (r ? ", [" : "[");
    for (int c = 0; c < 4; ++c) os << (c ? ", " : "") << slack(r, c).imag();
    os << "]";
  }
  os << "]}";
  return os.str();
}

KktReport kkt_check(const DensityMatrix& rho, const DensityMatrix& sigma,
                    const Mat4& bell_op) {
  const Spectrum sr = spectrum(rho);
  int rank = 0;
  for (int i = 0; i < 4; ++i)
    if (sr.eigenvalues(i) > kRankTol) ++rank;
  if (rank != 2)
    throw RankError("kkt_check: state must have rank 2, found rank " +
                    std::to_string(rank));

  const double l1 = sr.eigenvalues(0);
  const double l2 = sr.eigenvalues(1);
  const CVec4 e1 = sr.eigenvectors.col(0);
  const CVec4 e2 = sr.eigenvectors.col(1);

  KktReport rep;
  rep.gamma = std::log(2.0);
  rep.beta = 2.0 * std::sqrt(std::max(horodecki_m(rho), 0.0));

  const double er_bits = relative_entropy(rho, sigma);
  if (!std::isfinite(er_bits)) {
    rep.cond0_residual = std::numeric_limits<double>::infinity();
    rep.cond1_residual = std::numeric_limits<double>::infinity();
    rep.min_eig_x = -std::numeric_limits<double>::infinity();
    rep.passed = false;
    return rep;
  }
  const double er_nats = rep.gamma * er_bits;

  const Mat4 ln_sigma = support_log(sigma.matrix());
  Mat4 ln_rho = std::log(l1) * (e1 * e1.adjoint());
  ln_rho += std::log(l2) * (e2 * e2.adjoint());
  const Mat4 proj = e1 * e1.adjoint() + e2 * e2.adjoint();

  const Complex s12 = e1.dot(ln_sigma * e2);
  const Complex b12 = e1.dot(bell_op * e2);
  const double s11 = e1.dot(ln_sigma * e1).real();
  const double s22 = e2.dot(ln_sigma * e2).real();
  const double b11 = e1.dot(bell_op * e1).real();
  const double b22 = e2.dot(bell_op * e2).real();

  // The diagonal condition on e1 fixes l; the off-diagonal condition and the
  // diagonal condition on e2 are then residual checks of extremality.
  const double denom = rep.beta - b11;
  if (std::abs(denom) > 1e-10)
    rep.multiplier_l = (std::log(l1) - s11 - er_nats) / denom;
  else if (std::abs(b12) > 1e-10)
    rep.multiplier_l = (s12 / b12).real();
  else
    rep.multiplier_l = 0.0;

  rep.cond0_residual = std::abs(s12 - rep.multiplier_l * b12);
  rep.cond1_residual =
      std::abs(std::log(l2) - s22 + rep.multiplier_l * b22 - er_nats -
               rep.multiplier_l * rep.beta);

  Mat4 x = ln_rho - ln_sigma + proj + rep.multiplier_l * bell_op -
           (er_nats + 1.0 + rep.multiplier_l * rep.beta) * Mat4::Identity();
  x = 0.5 * (x + x.adjoint());
  rep.slack = x;

  Eigen::SelfAdjointEigenSolver<Mat4> ex(x, Eigen::EigenvaluesOnly);
  rep.min_eig_x = ex.eigenvalues().minCoeff();
  rep.trace_x_rho = (x * rho.matrix()).trace().real();

  rep.passed = rep.min_eig_x >= -kPassTol &&
               std::abs(rep.trace_x_rho) <= kPassTol &&
               rep.cond0_residual <= kPassTol;
  return rep;
}

Mat4 chsh_op_bell_diagonal(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw DomainError("chsh_op_bell_diagonal: p outside [0,1]");
  p = std::clamp(p, 0.0, 1.0);
  const double w = 2.0 * p - 1.0;
  const double eta = 2.0 / std::sqrt(1.0 + w * w);
  return Mat4(eta * (-kron(pauli(3), pauli(3)) + w * kron(pauli(1), pauli(1))));
}

Mat4 chsh_op_adc(double alpha, double p) {
  if (alpha < -1e-12 || alpha > 1.0 + 1e-12 || p < -1e-12 || p > 1.0 + 1e-12)
    throw DomainError("chsh_op_adc: parameters outside [0,1]");
  alpha = std::clamp(alpha, 0.0, 1.0);
  p = std::clamp(p, 0.0, 1.0);

  const double aa = alpha * (1.0 - alpha);
  const double w = 1.0 - 2.0 * p;
  const double x = 4.0 * p * p * aa;  // squared concurrence
  const double m = std::max(x, w * w) + x;
  if (m < 1e-20) {
    // Vanishing correlation matrix: any admissible operator is optimal.
    return Mat4(std::sqrt(2.0) *
                (kron(pauli(1), pauli(1)) + kron(pauli(3), pauli(3))));
  }

  if (x - w * w < 0.0) {
    const double eta1 = 2.0 / std::sqrt(w * w + x);
    return Mat4(eta1 * (w * kron(pauli(3), pauli(3)) +
                        2.0 * p * std::sqrt(aa) * kron(pauli(1), pauli(1))));
  }
  // Planar branch: normalized so the expectation on rho_A reaches 2 sqrt(M)
  // = 2 sqrt(2 x).
  const double eta2 = 2.0 / std::sqrt(2.0 * p * p * aa);
  return Mat4(eta2 * p * std::sqrt(aa) *
              (kron(pauli(1), pauli(1)) + kron(pauli(2), pauli(2))));
}

BoundaryPoint a2_params(double b) {
  if (b < -1e-12 || b > 1.0 + 1e-12)
    throw DomainError("a2_params: B outside [0,1]");
  b = std::clamp(b, 0.0, 1.0);

  const bool at_kink = std::abs(b - kUpperBoundaryKink) <= 1e-12;
  double p;
  if (at_kink || b > kUpperBoundaryKink)
    p = 1.0;
  else
    p = 0.25 * (2.0 + std::sqrt(2.0 + 2.0 * b * b));

  const double disc = std::max(0.0, 5.0 * p * p - 4.0 * p - b * b);
  const double alpha = (p - std::sqrt(disc)) / (2.0 * p);

  const AdcState s = adc_state(alpha, p);
  double er;
  if (p >= 1.0 - 1e-12)
    er = wootters_w(b);
  else
    er = css_gen_horodecki(alpha, p).solution.ree;

  return BoundaryPoint{b, p, alpha, s.rho, er, at_kink};
}

BoundaryPoint d_params(double b) {
  if (b < -1e-12 || b > 1.0 + 1e-12)
    throw DomainError("d_params: B outside [0,1]");
  b = std::clamp(b, 0.0, 1.0);
  const double p = 0.5 * (1.0 + b);

  const CVec4 plus = PureState::psi_plus().ket();
  const CVec4 minus = PureState::psi_minus().ket();
  const Mat4 m =
      p * (plus * plus.adjoint()) + (1.0 - p) * (minus * minus.adjoint());
  return BoundaryPoint{b, p, 0.5, DensityMatrix(m), 1.0 - binary_entropy(p),
                       false};
}

KktReport kkt_check_lower_family(double b) {
  const BoundaryPoint pt = d_params(b);
  const CVec4 plus = PureState::psi_plus().ket();
  const CVec4 minus = PureState::psi_minus().ket();
  const DensityMatrix css(
      Mat4(0.5 * (plus * plus.adjoint()) + 0.5 * (minus * minus.adjoint())));
  return kkt_check(pt.state, css, chsh_op_bell_diagonal(pt.p));
}

KktReport kkt_check_upper_family(double b) {
  const BoundaryPoint pt = a2_params(b);
  const DensityMatrix css = css_gen_horodecki(pt.alpha, pt.p).solution.sigma;

  // On the family T^T T = x I: every orthonormal pair maximizes the CHSH
  // expectation, and the admissible constraint gradients form the set
  // sqrt(2) D (I - K) with D = diag(1,1,-1), K PSD, tr K = 1. Scan the
  // symmetric slice K = diag(k, k, 1-2k) for the member with the largest
  // slack floor.
  const Mat4 o12 =
      std::sqrt(2.0) * (kron(pauli(1), pauli(1)) + kron(pauli(2), pauli(2)));
  const Mat4 oz = std::sqrt(2.0) *
                  (0.5 * (kron(pauli(1), pauli(1)) + kron(pauli(2), pauli(2))) -
                   kron(pauli(3), pauli(3)));
  const auto report_at = [&](double lam) {
    return kkt_check(pt.state, css, Mat4(lam * o12 + (1.0 - lam) * oz));
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 120; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (report_at(m1).min_eig_x < report_at(m2).min_eig_x)
      lo = m1;
    else
      hi = m2;
  }
  return report_at(0.5 * (lo + hi));
}

}  // namespace entfrontier
