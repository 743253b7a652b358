/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace entfrontier {

namespace {

Mat4 sqrt_psd(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Vec4 ev = es.eigenvalues();
  // Eigenvalue dust below 1e-13 is zeroed exactly so the root's kernel is
  // exact; sqrt would otherwise amplify it to 1e-7-scale noise.
  for (int i = 0; i < 4; ++i) ev(i) = ev(i) > 1e-13 ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// sigma_2 x sigma_2, the spin-flip conjugation matrix (real symmetric).
const Mat4& spin_flip() {
  static const Mat4 y2 = kron(pauli(2), pauli(2));
  return y2;
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  // The spin-flipped spectrum through the Hermitian similarity: with
  // K = sqrt(rho) Y sqrt(rho)^*, the lambda_j are the eigenvalue roots of
  // K K^dagger = sqrt(rho) Y rho^* Y sqrt(rho), i.e. the singular values
  // of K, which stay accurate for rank-deficient states.
  const Mat4 root = sqrt_psd(rho.matrix());
  const Mat4 k = root * spin_flip() * root.conjugate();
  Eigen::JacobiSVD<Mat4> svd(k);
  const Vec4& l = svd.singularValues();  // sorted descending
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

double negativity(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(partial_transpose(rho),
                                         Eigen::EigenvaluesOnly);
  return std::max(0.0, -2.0 * es.eigenvalues().minCoeff());
}

double horodecki_m(const DensityMatrix& rho) {
  const BlochForm b = to_bloch(rho);
  const Mat3 u = b.t.transpose() * b.t;
  Eigen::SelfAdjointEigenSolver<Mat3> es(u, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(2) + es.eigenvalues()(1);
}

double nonlocality_b(const DensityMatrix& rho) {
  return std::sqrt(std::max(0.0, horodecki_m(rho) - 1.0));
}

double bell_diagonal_b(double l1, double l2, double l3, double l4) {
  const double sum = l1 + l2 + l3 + l4;
  if (std::min({l1, l2, l3, l4}) < -1e-12 || std::abs(sum - 1.0) > 1e-9)
    throw DomainError("bell_diagonal_b: arguments must be probabilities");
  const std::array<double, 3> l{l1, l2, l3};
  double best = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double li = l[c], lj = l[(c + 1) % 3], lk = l[(c + 2) % 3];
    best = std::max(best, (li - lj) * (li - lj) + (lk - l4) * (lk - l4));
  }
  return std::sqrt(std::max(0.0, 2.0 * best - 1.0));
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

MeasureSet measure_set(const DensityMatrix& rho) {
  MeasureSet out;
  out.concurrence = concurrence(rho);
  out.negativity = negativity(rho);
  out.horodecki_m = horodecki_m(rho);
  out.nonlocality = std::sqrt(std::max(0.0, out.horodecki_m - 1.0));
  out.purity = purity(rho);
  return out;
}

namespace {

Mat4 dot_sigma_kron(const Vec3& a, const Vec3& b) {
  Mat2 sa = Mat2::Zero(), sb = Mat2::Zero();
  for (int i = 1; i <= 3; ++i) {
    sa += a(i - 1) * pauli(i);
    sb += b(i - 1) * pauli(i);
  }
  return kron(sa, sb);
}

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
  const double n = v.norm();
  return n > 1e-14 ? Vec3(v / n) : fallback;
}

}  // namespace

ChshOperator chsh_operator(const DensityMatrix& rho) {
  const BlochForm bf = to_bloch(rho);
  const Mat3 u = bf.t.transpose() * bf.t;
  Eigen::SelfAdjointEigenSolver<Mat3> es(u);

  const double h1 = es.eigenvalues()(2);
  const double h2 = es.eigenvalues()(1);
  const Vec3 u1 = es.eigenvectors().col(2);
  const Vec3 u2 = es.eigenvectors().col(1);

  ChshOperator out;
  out.degenerate = (h1 - h2) <= 1e-12;

  const Vec3 tv1 = bf.t * u1;
  const Vec3 tv2 = bf.t * u2;
  out.a = unit_or(tv1, Vec3::UnitZ());
  out.a_prime = unit_or(tv2, Vec3::UnitX());

  const double d = std::sqrt(std::max(h1 + h2, 0.0));
  double cos_th = 1.0 / std::sqrt(2.0), sin_th = 1.0 / std::sqrt(2.0);
  if (d > 1e-14) {
    cos_th = std::clamp(tv1.norm() / d, 0.0, 1.0);
    sin_th = std::sqrt(std::max(0.0, 1.0 - cos_th * cos_th));
  }
  out.b = cos_th * u1 + sin_th * u2;
  out.b_prime = cos_th * u1 - sin_th * u2;

  out.op = dot_sigma_kron(out.a, out.b + out.b_prime) +
           dot_sigma_kron(out.a_prime, out.b - out.b_prime);
  return out;
}

double binary_entropy(double x) {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw DomainError("binary_entropy: argument outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double wootters_w(double b) {
  if (b < -1e-12 || b > 1.0 + 1e-12)
    throw DomainError("wootters_w: argument outside [0,1]");
  b = std::clamp(b, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - b * b)));
}

}  // namespace entfrontier
