/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/ree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "entfrontier/measures.hpp"

namespace entfrontier {

namespace {

constexpr double kPatternTol = 1e-10;   // family detection
constexpr double kSupportTol = 1e-12;
constexpr double kPptTol = 1e-9;
const double kLn2 = std::log(2.0);

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

const char* to_string(CssMethod m) {
  switch (m) {
    case CssMethod::pure: return "pure";
    case CssMethod::bell_diagonal: return "bell_diagonal";
    case CssMethod::horodecki: return "horodecki";
    case CssMethod::gen_horodecki: return "gen_horodecki";
    case CssMethod::v_state: return "v_state";
    case CssMethod::numeric: return "numeric";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Closed forms

CssSolution ree_pure(const PureState& psi) {
  Mat2 amp;
  amp << psi.a, psi.b, psi.c, psi.d;  // amp(i,j) = <ij|psi>
  Eigen::JacobiSVD<Mat2> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);

  // |psi> = sum_k s_k |u_k> x |conj(v_k)>; the CSS is the Schmidt-dephased
  // mixture sum_k s_k^2 P_k.
  Mat4 sigma = Mat4::Zero();
  for (int k = 0; k < 2; ++k) {
    const double mu = svd.singularValues()(k) * svd.singularValues()(k);
    Eigen::Vector2cd u = svd.matrixU().col(k);
    Eigen::Vector2cd v = svd.matrixV().col(k).conjugate();
    CVec4 prod;
    prod << u(0) * v(0), u(0) * v(1), u(1) * v(0), u(1) * v(1);
    sigma += mu * (prod * prod.adjoint());
  }

  const double b = 2.0 * std::abs(psi.a * psi.d - psi.b * psi.c);
  return CssSolution{DensityMatrix(sigma), wootters_w(std::min(b, 1.0)),
                     CssMethod::pure};
}

CssSolution ree_bell_diagonal(double l1, double l2, double l3, double l4) {
  std::array<double, 4> l{l1, l2, l3, l4};
  double sum = 0.0;
  for (double& v : l) {
    if (v < -1e-12) throw DomainError("ree_bell_diagonal: negative probability");
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DomainError("ree_bell_diagonal: probabilities must sum to one");

  const Mat4& v = bell_basis();
  const auto mix = [&](const std::array<double, 4>& w) {
    Mat4 m = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
      m += w[i] * (v.col(i) * v.col(i).adjoint());
    return m;
  };

  const int top = static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
  if (l[top] <= 0.5) return CssSolution{DensityMatrix(mix(l)), 0.0, CssMethod::bell_diagonal};

  std::array<double, 4> w{};
  const double rest = 1.0 - l[top];
  if (rest > 1e-15) {
    for (int i = 0; i < 4; ++i) w[i] = l[i] / (2.0 * rest);
  } else {
    // Bell state: put the complementary half on the next Bell ket.
    w[(top + 1) % 4] = 0.5;
  }
  w[top] = 0.5;
  return CssSolution{DensityMatrix(mix(w)), 1.0 - binary_entropy(l[top]),
                     CssMethod::bell_diagonal};
}

double ree_horodecki_value(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw DomainError("ree_horodecki: p outside [0,1]");
  p = std::clamp(p, 0.0, 1.0);
  double value = (p - 2.0) * std::log2(1.0 - 0.5 * p);
  if (p < 1.0) value += (1.0 - p) * std::log2(1.0 - p);
  return value;
}

// ---------------------------------------------------------------------------
// Generalized-Horodecki closest separable state

namespace {

struct GenCoefficients {
  double r1, r2, r3, r4, delta, z, log_ratio;
  bool valid;
};

// Coefficient chain R1 -> (delta, R2, R3, R4) for the amplitude-damped CSS.
GenCoefficients gen_coefficients(double alpha, double p, double r1) {
  GenCoefficients c{};
  c.r1 = r1;
  c.r4 = r1 - 1.0 + p;
  const double inner = r1 * c.r4 * p * p * alpha * (1.0 - alpha);
  c.delta = (4.0 - 3.0 * p) * (4.0 - 3.0 * p) -
            4.0 * alpha * (1.0 - alpha) * p * p - 8.0 * r1 * (2.0 - p) +
            16.0 * std::sqrt(std::max(inner, 0.0));
  if (c.delta < 0.0 || c.r4 < -1e-15) {
    c.valid = false;
    return c;
  }
  c.r2 = 0.25 * (1.0 + 3.0 * (1.0 - p) + 2.0 * p * alpha - 4.0 * r1 -
                 std::sqrt(c.delta));
  c.r3 = 1.0 - c.r1 - c.r2 - c.r4;
  const double d23 = c.r2 - c.r3;
  c.z = std::sqrt(d23 * d23 + 4.0 * std::max(c.r1 * c.r4, 0.0));
  const double lo = c.r2 + c.r3 - c.z;
  const double hi = c.r2 + c.r3 + c.z;
  c.log_ratio = (lo > 0.0 && hi > 0.0) ? std::log(lo) - std::log(hi)
                                       : -std::numeric_limits<double>::infinity();
  c.valid = std::isfinite(c.r2) && std::isfinite(c.r3);
  return c;
}

double gen_residual(double alpha, double p, double r1) {
  const GenCoefficients c = gen_coefficients(alpha, p, r1);
  if (!c.valid) return std::numeric_limits<double>::quiet_NaN();
  double value = c.r2 - alpha * p;
  if (c.r4 > 1e-300) {
    const double z2 = c.z * c.z;
    if (z2 > 0.0)
      value += 2.0 * c.r4 * (c.r2 * c.r2 - c.r2 * c.r3 + 2.0 * c.r1 * c.r4) / z2;
    if (std::isfinite(c.log_ratio) && std::abs(c.log_ratio) > 0.0 && c.z > 0.0)
      value += 2.0 * c.r4 * (c.r2 - c.r3) / (c.log_ratio * c.z);
  }
  return value;
}

Mat4 gen_sigma_matrix(const GenCoefficients& c, bool swapped) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = std::max(c.r1, 0.0);
  m(1, 1) = std::max(swapped ? c.r3 : c.r2, 0.0);
  m(2, 2) = std::max(swapped ? c.r2 : c.r3, 0.0);
  m(3, 3) = std::max(c.r4, 0.0);
  const double cross = std::sqrt(std::max(c.r1 * c.r4, 0.0));
  m(1, 2) = cross;
  m(2, 1) = cross;
  const double tr = m.trace().real();
  m /= tr;  // removes O(clipping) dust only
  return m;
}

struct RhoEig {
  Vec4 p;
  Mat4 vecs;
  double plogp;  // sum p log2 p
};

RhoEig rho_eig(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(rho.matrix());
  RhoEig out;
  out.p = es.eigenvalues().cwiseMax(0.0);
  out.vecs = es.eigenvectors();
  out.plogp = 0.0;
  for (int i = 0; i < 4; ++i) out.plogp += xlog2x(out.p(i));
  return out;
}

// S(rho||sigma) with sigma's spectrum floored at 1e-12 and renormalized:
// finite and continuous where the unfloored value jumps to infinity on
// support-tolerance slivers.
double floored_relative_entropy(const RhoEig& rho, const Mat4& sigma) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(sigma);
  Vec4 q = es.eigenvalues().cwiseMax(kSupportTol);
  q /= q.sum();
  double cross = 0.0;
  for (int j = 0; j < 4; ++j) {
    double mass = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (rho.p(i) <= kSupportTol) continue;
      mass += rho.p(i) * std::norm(rho.vecs.col(i).dot(es.eigenvectors().col(j)));
    }
    cross += mass * std::log2(q(j));
  }
  return rho.plogp - cross;
}

// Residual of the defining equation with R2 freed from the delta chain.
double gen_residual_free(double alpha, double p, double r1, double r2) {
  const double r4 = r1 - 1.0 + p;
  const double r3 = 1.0 - r1 - r2 - r4;
  const double z = std::sqrt((r2 - r3) * (r2 - r3) + 4.0 * std::max(r1 * r4, 0.0));
  double value = r2 - alpha * p;
  if (r4 > 1e-300 && z > 0.0) {
    value += 2.0 * r4 * (r2 * r2 - r2 * r3 + 2.0 * r1 * r4) / (z * z);
    const double lo = r2 + r3 - z;
    if (lo > 1e-300) {
      const double ratio = std::log(lo) - std::log(r2 + r3 + z);
      value += 2.0 * r4 * (r2 - r3) / (ratio * z);
    }
  }
  return value;
}

// Floored relative entropy to the structured state diag(r1, r2, r3, r4)
// plus the sqrt(r1 r4) coherence, with r4 = r1 - 1 + p; +inf outside the
// PSD region.
double structured_er(const RhoEig& rho, double p, double r1, double r2) {
  const double r4 = r1 - 1.0 + p;
  const double r3 = 1.0 - r1 - r2 - r4;
  if (r1 < 0.0 || r2 < 0.0 || r3 < 0.0 || r4 < -1e-15)
    return std::numeric_limits<double>::infinity();
  if (r2 * r3 < r1 * r4 - 1e-14)
    return std::numeric_limits<double>::infinity();
  GenCoefficients c{};
  c.r1 = r1;
  c.r2 = r2;
  c.r3 = r3;
  c.r4 = std::max(r4, 0.0);
  return floored_relative_entropy(rho, gen_sigma_matrix(c, false));
}

template <typename F>
double golden_min(const F& f, double lo, double hi, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Coordinate-descent polish of the structured family around a candidate;
// covers the borderland between the interior-root and rank-3 regimes.
// r2 is parametrized by its position w in the PSD-admissible slice at the
// current r1, so the curved feasibility boundary stays axis-aligned and the
// descent can slide along it.
GenCoefficients refine_structured(const RhoEig& rho, double p,
                                  const GenCoefficients& seed) {
  const auto r2_range = [p](double r1, double* lo, double* hi) {
    const double r4 = r1 - 1.0 + p;
    const double s = 1.0 - r1 - r4;
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * r1 * r4));
    *lo = 0.5 * (s - disc);
    *hi = 0.5 * (s + disc);
  };
  const auto er_at = [&](double r1, double w) {
    double lo, hi;
    r2_range(r1, &lo, &hi);
    return structured_er(rho, p, r1, lo + w * (hi - lo));
  };

  double r1 = seed.r1;
  double lo, hi;
  r2_range(r1, &lo, &hi);
  double w = hi > lo ? std::clamp((seed.r2 - lo) / (hi - lo), 0.0, 1.0) : 0.0;
  const double lo1 = std::max(0.0, 1.0 - p), hi1 = 1.0 - 0.5 * p;
  for (int sweep = 0; sweep < 6; ++sweep) {
    w = golden_min([&](double v) { return er_at(r1, v); }, 0.0, 1.0, 1e-13);
    r1 = golden_min([&](double v) { return er_at(v, w); },
                    std::max(lo1, r1 - 0.05), std::min(hi1, r1 + 0.05), 1e-13);
  }

  GenCoefficients c{};
  c.r1 = r1;
  r2_range(r1, &lo, &hi);
  c.r2 = lo + w * (hi - lo);
  c.r4 = std::max(r1 - 1.0 + p, 0.0);
  c.r3 = 1.0 - r1 - c.r2 - c.r4;
  const double d23 = c.r2 - c.r3;
  c.z = std::sqrt(d23 * d23 + 4.0 * c.r1 * c.r4);
  const double lam_lo = c.r2 + c.r3 - c.z;
  c.log_ratio = lam_lo > 0.0
                    ? std::log(lam_lo) - std::log(c.r2 + c.r3 + c.z)
                    : -std::numeric_limits<double>::infinity();
  c.delta = 0.0;
  c.valid = true;
  return c;
}

// Near the symmetric line the CSS picks up a second active constraint: the
// {01,10} block itself becomes singular (R2 R3 = R1 R4) with the kernel
// orthogonal to |psi_alpha>, which fixes R2 = s alpha, R3 = s (1 - alpha)
// with s = 1 - R1 - R4 and leaves a quadratic for R1:
//   (4u - 1) R1^2 + [(1 - p) - 4u(2 - p)] R1 + u (2 - p)^2 = 0,  u = a(1-a).
// The transcendental equation then holds identically (its residual reduces
// to alpha (s + 2 R4 - p) = 0).
std::vector<GenCoefficients> rank3_candidates(double a, double p) {
  const double u = a * (1.0 - a);
  const double qa = 4.0 * u - 1.0;
  const double qb = (1.0 - p) - 4.0 * u * (2.0 - p);
  const double qc = u * (2.0 - p) * (2.0 - p);

  std::vector<double> roots;
  if (std::abs(qa) < 1e-12) {
    if (std::abs(qb) > 0.0) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      roots.push_back(q / qa);
      if (std::abs(q) > 0.0) roots.push_back(qc / q);
    }
  }

  std::vector<GenCoefficients> out;
  for (double r1 : roots) {
    if (!(r1 >= 1.0 - p - 1e-12 && r1 <= 1.0 - 0.5 * p + 1e-12)) continue;
    GenCoefficients c{};
    c.r1 = std::max(r1, 0.0);
    c.r4 = std::max(r1 - 1.0 + p, 0.0);
    const double s = 1.0 - c.r1 - c.r4;
    if (s < 0.0) continue;
    c.r2 = s * a;
    c.r3 = s * (1.0 - a);
    c.z = s;
    c.log_ratio = -std::numeric_limits<double>::infinity();
    c.delta = 0.0;
    c.valid = true;
    out.push_back(c);
  }
  return out;
}

}  // namespace

GenHorodeckiCss css_gen_horodecki(double alpha, double p) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw DomainError("css_gen_horodecki: alpha must lie in (0,1)");
  if (p <= 0.0 || p > 1.0 + 1e-12)
    throw DomainError("css_gen_horodecki: p must lie in (0,1]");
  p = std::min(p, 1.0);

  // The coefficient chain is written for the |01>-light branch; solve the
  // mirrored state (qubits swapped) when alpha > 1/2 and swap back at the end.
  const bool swapped = alpha > 0.5;
  const double a = swapped ? 1.0 - alpha : alpha;

  GenHorodeckiCss out;
  GenCoefficients coeff{};

  if (p >= 1.0 - 1e-12) {
    // Pure input: R1 = R4 = 0 solves the equation exactly and the CSS is the
    // Schmidt-dephased mixture.
    coeff = gen_coefficients(a, 1.0, 0.0);
    coeff.r1 = coeff.r4 = 0.0;
    coeff.r2 = a;
    coeff.r3 = 1.0 - a;
    out.residual = 0.0;
  } else {
    const double lo = std::max(1e-14, 1.0 - p);
    const double hi = 1.0 - 0.5 * p;  // R2 + R3 >= 0
    constexpr int kScan = 1024;

    // The equation can hold at several points (including a spurious zero on
    // the R4 = 0 edge); bisect every sign change, add the rank-3 closed
    // forms, and keep the candidate that actually minimizes the relative
    // entropy.
    const DensityMatrix rho_canon = adc_state(a, p).rho;
    const RhoEig rho_canon_eig = rho_eig(rho_canon);
    std::vector<GenCoefficients> candidates;
    std::vector<double> residuals;

    // Scan points: geometric prefix hugging the lower bracket edge (the
    // root collapses onto it as p -> 1) followed by a uniform sweep.
    std::vector<double> scan_points;
    scan_points.reserve(kScan + 40);
    scan_points.push_back(lo);
    const double cell = (hi - lo) / kScan;
    for (double d = cell * 1e-9; d < cell; d *= 1.8)
      scan_points.push_back(lo + d);
    for (int i = 1; i <= kScan; ++i) scan_points.push_back(lo + (hi - lo) * i / kScan);

    double prev_r = std::numeric_limits<double>::quiet_NaN();
    double prev_f = std::numeric_limits<double>::quiet_NaN();
    for (const double r : scan_points) {
      const double f = gen_residual(a, p, r);
      if (!std::isfinite(f)) {
        prev_r = prev_f = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      if (std::isfinite(prev_f) && prev_f * f <= 0.0) {
        // Bisection to interval width 1e-12, then one secant polish.
        double x0 = prev_r, x1 = r, f0 = prev_f, f1 = f;
        while (x1 - x0 > 1e-12) {
          const double xm = 0.5 * (x0 + x1);
          const double fm = gen_residual(a, p, xm);
          if (!std::isfinite(fm)) break;
          if (f0 * fm <= 0.0) {
            x1 = xm;
            f1 = fm;
          } else {
            x0 = xm;
            f0 = fm;
          }
        }
        double root = 0.5 * (x0 + x1);
        if (std::abs(f1 - f0) > 0.0) {
          const double sec = x0 - f0 * (x1 - x0) / (f1 - f0);
          if (sec >= lo && sec <= hi &&
              std::abs(gen_residual(a, p, sec)) <
                  std::abs(gen_residual(a, p, root)))
            root = sec;
        }
        const GenCoefficients c = gen_coefficients(a, p, root);
        if (c.valid && std::min({c.r1, c.r2, c.r3, c.r4}) >= -1e-10) {
          candidates.push_back(c);
          residuals.push_back(std::abs(gen_residual(a, p, root)));
        }
      }
      prev_r = r;
      prev_f = f;
    }
    for (const GenCoefficients& c : rank3_candidates(a, p)) {
      const double s = c.r2 + c.r3;
      candidates.push_back(c);
      residuals.push_back(
          s > 0.0 ? std::abs(c.r2 * (1.0 + 2.0 * c.r4 / s) - a * p) : 0.0);
    }
    if (candidates.empty())
      throw RootBracketFailure("css_gen_horodecki: no admissible root on [" +
                                   std::to_string(lo) + "," +
                                   std::to_string(hi) + "]",
                               gen_residual(a, p, lo), gen_residual(a, p, hi));

    double best_er = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double er = floored_relative_entropy(
          rho_canon_eig, gen_sigma_matrix(candidates[i], false));
      if (er < best_er) {
        best_er = er;
        best = i;
      }
    }
    coeff = candidates[best];
    out.residual = residuals[best];

    // Polish within the structured family; picks up the borderland where the
    // delta chain misses the exact optimum. Noise-level gains never replace
    // an exact closed-form candidate.
    const GenCoefficients refined = refine_structured(rho_canon_eig, p, coeff);
    const double refined_er =
        structured_er(rho_canon_eig, p, refined.r1, refined.r2);
    if (refined_er < best_er - 1e-11) {
      coeff = refined;
      out.residual = std::abs(gen_residual_free(a, p, refined.r1, refined.r2));
    }
  }

  for (double r : {coeff.r1, coeff.r2, coeff.r3, coeff.r4})
    if (r < -1e-10)
      throw NonPhysicalCss("css_gen_horodecki: negative coefficient " +
                           std::to_string(r));

  out.r1 = coeff.r1;
  out.r2 = coeff.r2;
  out.r3 = coeff.r3;
  out.r4 = coeff.r4;
  out.delta = coeff.delta;
  out.z = coeff.z;
  out.log_ratio = coeff.log_ratio;
  out.lambda_plus = 0.5 * (coeff.r2 + coeff.r3 + coeff.z);
  out.lambda_minus = 0.5 * (coeff.r2 + coeff.r3 - coeff.z);

  // Eigenkets of the {01,10} block: |l+-> ~ (l+- - R3)|01> + sqrt(R1 R4)|10>.
  const double cross = std::sqrt(std::max(coeff.r1 * coeff.r4, 0.0));
  for (int s = 0; s < 2; ++s) {
    const double lam = s == 0 ? out.lambda_plus : out.lambda_minus;
    CVec4 ket = CVec4::Zero();
    const double c01 = lam - coeff.r3;
    const double norm2 = c01 * c01 + cross * cross;
    if (norm2 > 1e-30) {
      ket(1) = c01 / std::sqrt(norm2);
      ket(2) = cross / std::sqrt(norm2);
    } else {
      ket(s == 0 ? 1 : 2) = 1.0;
    }
    if (swapped) std::swap(ket(1), ket(2));
    (s == 0 ? out.ket_plus : out.ket_minus) = ket;
  }

  const Mat4 sigma = gen_sigma_matrix(coeff, swapped);
  DensityMatrix sigma_dm(sigma);

  Eigen::SelfAdjointEigenSolver<Mat4> pt(partial_transpose(sigma),
                                         Eigen::EigenvaluesOnly);
  if (pt.eigenvalues().minCoeff() < -kPptTol)
    throw NonPhysicalCss("css_gen_horodecki: CSS fails the PPT check");

  const DensityMatrix rho = adc_state(alpha, p).rho;
  const double er = relative_entropy(rho, sigma_dm);
  out.solution = CssSolution{sigma_dm, er,
                             std::abs(alpha - 0.5) <= kPatternTol
                                 ? CssMethod::horodecki
                                 : CssMethod::gen_horodecki};
  return out;
}

CssSolution ree_horodecki(double p) {
  if (p < -1e-12 || p > 1.0 + 1e-12)
    throw DomainError("ree_horodecki: p outside [0,1]");
  p = std::clamp(p, 0.0, 1.0);
  if (p < 1e-12) {
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1.0;
    return CssSolution{DensityMatrix(m), 0.0, CssMethod::horodecki};
  }
  CssSolution sol = css_gen_horodecki(0.5, p).solution;
  sol.method = CssMethod::horodecki;
  sol.ree = ree_horodecki_value(p);
  return sol;
}

CssSolution ree_v_state(double alpha_eff) {
  if (alpha_eff < 0.5 - 1e-12 || alpha_eff > 1.0 + 1e-12)
    throw DomainError("ree_v_state: alpha' must lie in [1/2, 1]");
  alpha_eff = std::clamp(alpha_eff, 0.5, 1.0);
  const double bp = 2.0 * (1.0 - alpha_eff);

  Mat4 sigma = Mat4::Zero();
  sigma(1, 1) = 1.0 - 0.5 * bp;
  sigma(2, 2) = 0.5 * bp;

  const double mu = 0.5 * (std::sqrt((1.0 - bp) * (1.0 - bp) + bp * bp) + 1.0);
  const double er = binary_entropy(0.5 * bp) - binary_entropy(mu);
  return CssSolution{DensityMatrix(sigma), er, CssMethod::v_state};
}

// ---------------------------------------------------------------------------
// Family detection

CssMethod detect_family(const DensityMatrix& rho) {
  const Mat4& m = rho.matrix();

  Eigen::SelfAdjointEigenSolver<Mat4> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(3) >= 1.0 - kPatternTol) return CssMethod::pure;

  const Mat4 bell = bell_basis().adjoint() * m * bell_basis();
  double off = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) off = std::max(off, std::abs(bell(i, j)));
  if (off <= kPatternTol) return CssMethod::bell_diagonal;

  // Shared requirements of the damped families: support inside
  // span{|00>,|01>,|10>} with a real non-negative (01,10) coherence.
  double stray = std::abs(m(3, 3));
  for (int i = 0; i < 3; ++i)
    stray = std::max({stray, std::abs(m(i, 3)), std::abs(m(3, i))});
  stray = std::max({stray, std::abs(m(0, 1)), std::abs(m(0, 2))});
  if (stray > kPatternTol) return CssMethod::numeric;
  const Complex cross = m(1, 2);
  if (std::abs(cross.imag()) > kPatternTol || cross.real() < -kPatternTol)
    return CssMethod::numeric;

  const double m00 = m(0, 0).real();
  const double m11 = m(1, 1).real();
  const double m22 = m(2, 2).real();

  if (m00 <= kPatternTol) {
    // V pattern: m22 = coherence = B'/2 with the |01> population dominant.
    if (std::abs(cross.real() - m22) <= kPatternTol && m11 + kPatternTol >= m22)
      return CssMethod::v_state;
    return CssMethod::numeric;
  }

  // Generalized-Horodecki pattern: rank-1 block on {01,10}.
  const double p = m11 + m22;
  if (p <= kPatternTol) return CssMethod::numeric;
  if (std::abs(cross.real() - std::sqrt(std::max(m11 * m22, 0.0))) > kPatternTol)
    return CssMethod::numeric;
  const double alpha = m11 / p;
  return std::abs(alpha - 0.5) <= kPatternTol ? CssMethod::horodecki
                                              : CssMethod::gen_horodecki;
}

// ---------------------------------------------------------------------------
// Numeric PPT-constrained minimizer

namespace {

Vec4 project_simplex(const Vec4& v) {
  std::array<double, 4> u{v(0), v(1), v(2), v(3)};
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < 4; ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / (k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  Vec4 out;
  for (int i = 0; i < 4; ++i) out(i) = std::max(v(i) - theta, 0.0);
  return out;
}

Mat4 project_density(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  const Vec4 ev = project_simplex(es.eigenvalues());
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat4 project_ppt_cone(const Mat4& h) {
  const Mat4 g = partial_transpose(h);
  Eigen::SelfAdjointEigenSolver<Mat4> es(g);
  const Vec4 ev = es.eigenvalues().cwiseMax(0.0);
  return partial_transpose(
      Mat4(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint()));
}

double ppt_min_eig(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> pt(partial_transpose(m),
                                         Eigen::EigenvaluesOnly);
  return pt.eigenvalues().minCoeff();
}

// Feasibility restoration onto {PSD, unit trace} intersected with
// {PSD partial transpose} by Dykstra-corrected alternating projection.
// Used for start preparation and as a final safety net; the descent itself
// keeps iterates strictly PPT through a barrier, because the alternating
// scheme is too inexact near the boundary to support line searches.
Mat4 project_feasible(const Mat4& s0) {
  Mat4 x = project_density(s0);
  if (ppt_min_eig(x) >= -2e-12) return x;

  x = s0;
  Mat4 p = Mat4::Zero(), q = Mat4::Zero();
  for (int round = 0; round < 300; ++round) {
    const Mat4 y = project_density(x + p);
    p = x + p - y;
    x = project_ppt_cone(y + q);
    q = y + q - x;
    if ((x - y).cwiseAbs().maxCoeff() < 1e-13) break;
  }
  Mat4 z = project_density(x);
  for (int round = 0; round < 200 && ppt_min_eig(z) < -2e-12; ++round)
    z = project_density(project_ppt_cone(z));
  return z;
}

struct SigmaEval {
  Mat4 sigma;
  Mat4 vecs;
  Vec4 eigs;
  double objective = 0.0;  // S(rho||sigma) in bits, eigenvalues floored
  Mat4 pt_vecs;
  Vec4 pt_eigs;
  double log_barrier = 0.0;  // -ln det(sigma^PT) - ln det(sigma)
  bool interior = false;     // both sigma and sigma^PT positive definite

  double merit(double mu) const {
    return interior ? objective + mu * log_barrier
                    : std::numeric_limits<double>::infinity();
  }
};

SigmaEval evaluate(const RhoEig& rho, const Mat4& sigma) {
  SigmaEval out;
  out.sigma = sigma;
  Eigen::SelfAdjointEigenSolver<Mat4> es(sigma);
  out.vecs = es.eigenvectors();
  out.eigs = es.eigenvalues();
  Vec4 q = out.eigs.cwiseMax(kSupportTol);
  q /= q.sum();

  double cross = 0.0;
  for (int j = 0; j < 4; ++j) {
    double mass = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (rho.p(i) <= kSupportTol) continue;
      mass += rho.p(i) * std::norm(rho.vecs.col(i).dot(out.vecs.col(j)));
    }
    cross += mass * std::log2(q(j));
  }
  out.objective = rho.plogp - cross;

  Eigen::SelfAdjointEigenSolver<Mat4> pt(partial_transpose(sigma));
  out.pt_vecs = pt.eigenvectors();
  out.pt_eigs = pt.eigenvalues();
  out.interior = out.pt_eigs.minCoeff() > 0.0 && out.eigs.minCoeff() > 0.0;
  out.log_barrier = 0.0;
  if (out.interior)
    for (int i = 0; i < 4; ++i)
      out.log_barrier -= std::log(out.pt_eigs(i)) + std::log(out.eigs(i));
  return out;
}

// Gradient of sigma -> -tr(rho log2 sigma) via the first divided difference
// of log on sigma's eigenvalue pairs (iterates are strictly interior).
Mat4 entropy_gradient(const RhoEig& rho, const SigmaEval& se) {
  const Mat4 rho_m = rho.vecs * rho.p.asDiagonal() * rho.vecs.adjoint();
  const Mat4 rt = se.vecs.adjoint() * rho_m * se.vecs;
  const Vec4 q = se.eigs.cwiseMax(1e-300);
  Mat4 g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double a = q(i), b = q(j);
      const double k = std::abs(a - b) > 1e-14 * std::max(a, b)
                           ? (std::log(a) - std::log(b)) / (a - b)
                           : 2.0 / (a + b);
      g(i, j) = rt(i, j) * k;
    }
  }
  return Mat4(-(1.0 / kLn2) * (se.vecs * g * se.vecs.adjoint()));
}

// Merit gradient, projected onto the trace-zero slice.
Mat4 merit_gradient(const RhoEig& rho, const SigmaEval& se, double mu) {
  Mat4 g = entropy_gradient(rho, se);
  const Mat4 pt_inv = se.pt_vecs * se.pt_eigs.cwiseInverse().asDiagonal() *
                      se.pt_vecs.adjoint();
  const Mat4 inv =
      se.vecs * se.eigs.cwiseInverse().asDiagonal() * se.vecs.adjoint();
  g -= mu * (partial_transpose(pt_inv) + inv);
  g -= (g.trace() / 4.0) * Mat4::Identity();
  return g;
}

// Frobenius-orthonormal real coordinates of a Hermitian 4x4.
using Vec16 = Eigen::Matrix<double, 16, 1>;

Vec16 to_coords(const Mat4& h) {
  Vec16 v;
  int k = 0;
  const double s2 = std::sqrt(2.0);
  for (int i = 0; i < 4; ++i) v(k++) = h(i, i).real();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      v(k++) = s2 * h(i, j).real();
      v(k++) = s2 * h(i, j).imag();
    }
  return v;
}

Mat4 from_coords(const Vec16& v) {
  Mat4 h = Mat4::Zero();
  int k = 0;
  const double is2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 4; ++i) h(i, i) = v(k++);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double re = v(k++) * is2;
      const double im = v(k++) * is2;
      h(i, j) = Complex{re, im};
      h(j, i) = Complex{re, -im};
    }
  return h;
}

struct StartResult {
  SigmaEval best;
  std::vector<double> trace;
  int iterations = 0;
  // the barrier continuation ran to its end (or reached a stationary point
  // early) within the iteration budget
  bool completed = false;
};

// Interior-point continuation: for a decreasing barrier weight mu, minimize
// the merit S(rho||sigma) - mu [ln det(sigma^PT) + ln det(sigma)] over the
// unit-trace slice by L-BFGS with backtracking halving from step 1.
// Iterates stay strictly feasible, so the plain objective is an honest
// upper bound on the REE at every step.
StartResult run_start(const RhoEig& rho, const Mat4& start, int max_iter,
                      double stall_eps, bool record_trace,
                      double best_so_far) {
  StartResult res;

  // Strictly interior starting point: mix toward I/4 as needed.
  const Mat4 base = project_density(start);
  Mat4 s0 = base;
  for (double mix = 1e-8; mix <= 1.0; mix *= 10.0) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(s0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() > 1e-14 && ppt_min_eig(s0) > 1e-14) break;
    s0 = (1.0 - mix) * base + mix * Mat4::Identity() * 0.25;
  }
  SigmaEval cur = evaluate(rho, s0);
  // Every iterate is feasible, so the smallest plain objective seen anywhere
  // is the solver's answer; the recorded trace is this incumbent value.
  SigmaEval incumbent = cur;
  if (record_trace) res.trace.push_back(incumbent.objective);

  static constexpr std::array<double, 8> kMuStages{
      1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  constexpr int kMemory = 8;

  bool out_of_budget = false;
  for (const double mu : kMuStages) {
    std::vector<Vec16> s_hist, y_hist;
    Vec16 g = to_coords(merit_gradient(rho, cur, mu));

    for (int iter = 0; iter < 150; ++iter) {
      if (++res.iterations > max_iter) {
        out_of_budget = true;
        break;
      }
      if (g.norm() < std::max(stall_eps, 1e-2 * mu)) break;

      // L-BFGS two-loop recursion on the stored trace-free pairs.
      Vec16 d = -g;
      const int m = static_cast<int>(s_hist.size());
      std::vector<double> alpha(m);
      for (int i = m - 1; i >= 0; --i) {
        const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
        alpha[i] = rho_i * s_hist[i].dot(d);
        d -= alpha[i] * y_hist[i];
      }
      if (m > 0) {
        const double gamma =
            s_hist[m - 1].dot(y_hist[m - 1]) / y_hist[m - 1].squaredNorm();
        d *= gamma;
      }
      for (int i = 0; i < m; ++i) {
        const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
        const double beta = rho_i * y_hist[i].dot(d);
        d += (alpha[i] - beta) * s_hist[i];
      }
      if (d.dot(g) > -1e-18) {
        d = -g;  // safeguard: fall back to steepest descent
        s_hist.clear();
        y_hist.clear();
      }

      const Mat4 dir = from_coords(d);
      bool accepted = false;
      double t = 1.0;
      SigmaEval next;
      for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
        next = evaluate(rho, Mat4(cur.sigma + t * dir));
        if (next.merit(mu) < cur.merit(mu)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;

      const Vec16 g_next = to_coords(merit_gradient(rho, next, mu));
      const Vec16 s_vec = t * d;
      const Vec16 y_vec = g_next - g;
      if (s_vec.dot(y_vec) > 1e-14 * s_vec.norm() * y_vec.norm()) {
        s_hist.push_back(s_vec);
        y_hist.push_back(y_vec);
        if (static_cast<int>(s_hist.size()) > kMemory) {
          s_hist.erase(s_hist.begin());
          y_hist.erase(y_hist.begin());
        }
      }
      cur = next;
      g = g_next;
      if (cur.objective < incumbent.objective) incumbent = cur;
      if (record_trace) res.trace.push_back(incumbent.objective);
    }
    // Scrub accumulated trace roundoff between stages.
    if (std::abs(cur.sigma.trace().real() - 1.0) > 1e-14)
      cur = evaluate(rho, Mat4(cur.sigma / cur.sigma.trace().real()));
    if (out_of_budget) break;
    // A convex objective cannot end below another already-converged start;
    // abandon hopeless tails once the central-path bias (~8 mu) is small.
    if (mu <= 1e-5 && incumbent.objective > best_so_far + 1e-3) break;
  }
  res.completed = !out_of_budget;
  res.best = incumbent;
  return res;
}

Mat4 random_ppt_start(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
  Mat4 m = g * g.adjoint();
  m /= m.trace().real();
  return project_feasible(m);
}

CssSolution family_solution(const DensityMatrix& rho, CssMethod method) {
  const Mat4& m = rho.matrix();
  switch (method) {
    case CssMethod::pure: {
      const Spectrum s = spectrum(rho);
      const CVec4 k = s.eigenvectors.col(0);
      return ree_pure(PureState(k(0), k(1), k(2), k(3)));
    }
    case CssMethod::bell_diagonal: {
      const Mat4 bm = bell_basis().adjoint() * m * bell_basis();
      return ree_bell_diagonal(bm(0, 0).real(), bm(1, 1).real(),
                               bm(2, 2).real(), bm(3, 3).real());
    }
    case CssMethod::horodecki:
      return ree_horodecki(1.0 - m(0, 0).real());
    case CssMethod::gen_horodecki: {
      const double p = m(1, 1).real() + m(2, 2).real();
      return css_gen_horodecki(m(1, 1).real() / p, p).solution;
    }
    case CssMethod::v_state:
      return ree_v_state(1.0 - m(2, 2).real());
    case CssMethod::numeric:
      break;
  }
  throw Error("family_solution: no closed form for this method");
}

}  // namespace

std::string ReeDiagnostics::to_json() const {
  std::ostringstream os;
  os.precision(12);
  os << "{\"converged\": " << (converged ? "true" : "false")
     << ", \"iterations\": " << iterations << ", \"best_start\": " << best_start
     << ", \"objective_trace\": [";
  for (std::size_t i = 0; i < objective_trace.size(); ++i) {
    if (i) os << ", ";
    os << objective_trace[i];
  }
  os << "]}";
  return os.str();
}

CssSolution ree_numeric(const DensityMatrix& rho, const ReeConfig& config,
                        ReeDiagnostics* diagnostics) {
  Eigen::SelfAdjointEigenSolver<Mat4> pt(partial_transpose(rho),
                                         Eigen::EigenvaluesOnly);
  if (pt.eigenvalues().minCoeff() >= -kPptTol) {
    if (diagnostics) *diagnostics = ReeDiagnostics{{}, 0, -1, true};
    return CssSolution{rho, 0.0, CssMethod::numeric};
  }

  const RhoEig re = rho_eig(rho);
  const double stall_eps = std::max(config.tol * 1e-2, 1e-12);

  // Most promising starts first; later ones are abandoned once they cannot
  // beat the incumbent.
  std::vector<Mat4> starts;
  const CssMethod family = detect_family(rho);
  if (config.use_family_start && family != CssMethod::numeric)
    starts.push_back(family_solution(rho, family).sigma.matrix());
  else
    starts.push_back(project_feasible(rho.matrix()));
  starts.push_back(Mat4(rho.matrix().diagonal().asDiagonal()));
  starts.push_back(Mat4(Mat4::Identity() * 0.25));
  std::mt19937_64 rng(config.seed);
  while (static_cast<int>(starts.size()) < std::max(config.starts, 1))
    starts.push_back(random_ppt_start(rng));
  starts.resize(std::max(config.starts, 1));

  StartResult best;
  best.best.objective = std::numeric_limits<double>::infinity();
  int best_index = -1;
  bool any_completed = false;
  int total_iter = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    StartResult r = run_start(re, starts[i], config.max_iter, stall_eps,
                              config.record_trace, best.best.objective);
    any_completed = any_completed || r.completed;
    total_iter += r.iterations;
    if (r.best.objective < best.best.objective) {
      best = std::move(r);
      best_index = static_cast<int>(i);
    }
  }

  if (!any_completed && config.throw_on_failure)
    throw ConvergenceFailure(
        "ree_numeric: no start completed its continuation schedule within " +
        std::to_string(config.max_iter) + " iterations");

  if (diagnostics) {
    diagnostics->objective_trace = best.trace;
    diagnostics->iterations = total_iter;
    diagnostics->best_start = best_index;
    diagnostics->converged = any_completed;
  }

  // Final value without the eigenvalue floor, on a verified-feasible state.
  Mat4 sig = best.best.sigma;
  sig = 0.5 * (sig + sig.adjoint());
  sig /= sig.trace().real();
  if (ppt_min_eig(sig) < -kPptTol) sig = project_feasible(sig);
  DensityMatrix sigma(sig);
  double er = relative_entropy(rho, sigma);
  if (!std::isfinite(er)) er = evaluate(re, sig).objective;
  return CssSolution{sigma, std::max(er, 0.0), CssMethod::numeric};
}

CssSolution ree(const DensityMatrix& rho) {
  const CssMethod family = detect_family(rho);
  if (family == CssMethod::numeric) return ree_numeric(rho);
  return family_solution(rho, family);
}

}  // namespace entfrontier
