/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/channels.hpp"

#include <cmath>

namespace entfrontier {

namespace {

void check_unit_interval(double v, const char* name) {
  if (v < -1e-12 || v > 1.0 + 1e-12)
    throw DomainError(std::string(name) + " must lie in [0,1]");
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Mat2> ops, double q)
    : operators(std::move(ops)), damping(q) {
  Mat2 sum = Mat2::Zero();
  for (const Mat2& e : operators) sum += e.adjoint() * e;
  const double dev = (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
  if (dev > 1e-12)
    throw DomainError("Kraus operators violate completeness: deviation = " +
                      std::to_string(dev));
}

KrausChannel adc_kraus(double q) {
  check_unit_interval(q, "adc_kraus: q");
  q = std::clamp(q, 0.0, 1.0);
  Mat2 e0 = Mat2::Zero(), e1 = Mat2::Zero();
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - q);
  e1(0, 1) = std::sqrt(q);
  return KrausChannel({e0, e1}, q);
}

KrausChannel pdc_kraus(double q) {
  check_unit_interval(q, "pdc_kraus: q");
  q = std::clamp(q, 0.0, 1.0);
  Mat2 e0 = Mat2::Zero(), e1 = Mat2::Zero();
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - q);
  e1(1, 1) = std::sqrt(q);
  return KrausChannel({e0, e1}, q);
}

DensityMatrix apply_two_side(const KrausChannel& ch1, const KrausChannel& ch2,
                             const DensityMatrix& rho_in) {
  Mat4 out = Mat4::Zero();
  for (const Mat2& e : ch1.operators)
    for (const Mat2& f : ch2.operators) {
      const Mat4 k = kron(e, f);
      out += k * rho_in.matrix() * k.adjoint();
    }
  return DensityMatrix(out);
}

DensityMatrix apply_one_side(const KrausChannel& ch, const DensityMatrix& rho_in) {
  Mat4 out = Mat4::Zero();
  for (const Mat2& e : ch.operators) {
    const Mat4 k = kron(e, Mat2::Identity());
    out += k * rho_in.matrix() * k.adjoint();
  }
  return DensityMatrix(out);
}

AdcState adc_state(double alpha_eff, double p) {
  check_unit_interval(alpha_eff, "adc_state: alpha'");
  check_unit_interval(p, "adc_state: p");
  alpha_eff = std::clamp(alpha_eff, 0.0, 1.0);
  p = std::clamp(p, 0.0, 1.0);

  AdcState s{alpha_eff, p, false, DensityMatrix()};
  if (p == 0.0) {
    s.alpha_eff = 0.0;
    s.alpha_degenerate = true;
  }
  const double cross = p * std::sqrt(s.alpha_eff * (1.0 - s.alpha_eff));
  Mat4 m = Mat4::Zero();
  m(0, 0) = 1.0 - p;
  m(1, 1) = p * s.alpha_eff;
  m(2, 2) = p * (1.0 - s.alpha_eff);
  m(1, 2) = cross;
  m(2, 1) = cross;
  s.rho = DensityMatrix(m);
  return s;
}

AdcState adc_closed_form(double alpha, double q1, double q2) {
  check_unit_interval(alpha, "adc_closed_form: alpha");
  check_unit_interval(q1, "adc_closed_form: q1");
  check_unit_interval(q2, "adc_closed_form: q2");
  const double p1 = 1.0 - std::clamp(q1, 0.0, 1.0);
  const double p2 = 1.0 - std::clamp(q2, 0.0, 1.0);
  alpha = std::clamp(alpha, 0.0, 1.0);

  // p equals the alpha' denominator, so total damping is the only
  // degenerate case.
  const double p = alpha * p2 + (1.0 - alpha) * p1;
  const double alpha_eff = p > 0.0 ? alpha * p2 / p : 0.0;
  return adc_state(alpha_eff, p);
}

PdcState pdc_closed_form(double alpha, double q1, double q2) {
  check_unit_interval(alpha, "pdc_closed_form: alpha");
  check_unit_interval(q1, "pdc_closed_form: q1");
  check_unit_interval(q2, "pdc_closed_form: q2");
  const double p1 = 1.0 - std::clamp(q1, 0.0, 1.0);
  const double p2 = 1.0 - std::clamp(q2, 0.0, 1.0);
  alpha = std::clamp(alpha, 0.0, 1.0);

  PdcState s;
  s.alpha = alpha;
  s.y = std::sqrt(alpha * (1.0 - alpha) * p1 * p2);
  const double q_eff = alpha * (1.0 - p1 * p2);
  s.p_eff = 1.0 - q_eff;
  s.alpha_eff = s.p_eff > 0.0 ? alpha * p1 * p2 / s.p_eff : 0.0;

  Mat4 m = Mat4::Zero();
  m(1, 1) = alpha;
  m(2, 2) = 1.0 - alpha;
  m(1, 2) = s.y;
  m(2, 1) = s.y;
  s.rho = DensityMatrix(m);
  return s;
}

MeasureSet adc_measures(const AdcState& s) {
  const double a = s.alpha_eff;
  const double p = s.p;
  const double x = 4.0 * (1.0 - a) * a * p * p;
  const double zz = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);

  MeasureSet out;
  out.concurrence = std::sqrt(x);
  out.negativity = std::sqrt((1.0 - p) * (1.0 - p) + x) - (1.0 - p);
  out.horodecki_m = std::max(x, zz) + x;
  out.nonlocality = std::sqrt(std::max(0.0, out.horodecki_m - 1.0));
  out.purity = purity(s.rho);
  return out;
}

const Mat4& bell_basis() {
  static const Mat4 v = [] {
    const double s = 1.0 / std::sqrt(2.0);
    Mat4 m = Mat4::Zero();
    m.col(0) << 0, s, -s, 0;  // psi-
    m.col(1) << 0, s, s, 0;   // psi+
    m.col(2) << s, 0, 0, -s;  // phi-
    m.col(3) << s, 0, 0, s;   // phi+
    return m;
  }();
  return v;
}

BellBasisForm bell_basis_decompose(const DensityMatrix& rho) {
  const Mat4& v = bell_basis();
  return BellBasisForm{v.adjoint() * rho.matrix() * v};
}

Mat4 BellBasisForm::reconstruct() const {
  const Mat4& v = bell_basis();
  return v * coefficients * v.adjoint();
}

}  // namespace entfrontier
