/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "entfrontier/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace entfrontier {

namespace {

constexpr double kHermTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kPsdTol = 1e-9;
constexpr double kSupportTol = 1e-12;

const double kLog2e = 1.0 / std::log(2.0);

}  // namespace

DensityMatrix::DensityMatrix(const Mat4& m) : m_(m) {
  if (!m.allFinite()) throw DomainError("density matrix has non-finite entries");
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > kHermTol) throw NotHermitian(herm_dev);
  const double trace_dev = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_dev > kTraceTol) throw NotUnitTrace(trace_dev);
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (m + m.adjoint()),
                                         Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) throw NotPSD(min_eig);
}

DensityMatrix validate_density(const Mat4& m) { return DensityMatrix(m); }

PureState::PureState(Complex a, Complex b, Complex c, Complex d)
    : a(a), b(b), c(c), d(d) {
  const double norm2 =
      std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw DomainError("pure state is not normalized: |norm^2 - 1| = " +
                      std::to_string(std::abs(norm2 - 1.0)));
}

CVec4 PureState::ket() const {
  CVec4 k;
  k << a, b, c, d;
  return k;
}

DensityMatrix PureState::density() const {
  const CVec4 k = ket();
  return DensityMatrix(k * k.adjoint());
}

PureState PureState::psi_alpha(double alpha) {
  if (alpha < -1e-12 || alpha > 1.0 + 1e-12)
    throw DomainError("psi_alpha: alpha outside [0,1]");
  alpha = std::clamp(alpha, 0.0, 1.0);
  return PureState(0.0, std::sqrt(alpha), std::sqrt(1.0 - alpha), 0.0);
}

PureState PureState::psi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(0.0, s, s, 0.0);
}

PureState PureState::psi_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(0.0, s, -s, 0.0);
}

PureState PureState::phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(s, 0.0, 0.0, s);
}

PureState PureState::phi_minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return PureState(s, 0.0, 0.0, -s);
}

const Mat2& pauli(int i) {
  static const Mat2 sx = (Mat2() << 0, 1, 1, 0).finished();
  static const Mat2 sy =
      (Mat2() << 0, Complex{0, -1}, Complex{0, 1}, 0).finished();
  static const Mat2 sz = (Mat2() << 1, 0, 0, -1).finished();
  switch (i) {
    case 1: return sx;
    case 2: return sy;
    case 3: return sz;
    default: throw DomainError("pauli index must be 1, 2 or 3");
  }
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

BlochForm to_bloch(const DensityMatrix& rho) {
  const Mat4& m = rho.matrix();
  const Mat2 id = Mat2::Identity();
  BlochForm out;
  for (int i = 1; i <= 3; ++i) {
    out.x(i - 1) = (m * kron(pauli(i), id)).trace().real();
    out.y(i - 1) = (m * kron(id, pauli(i))).trace().real();
    for (int j = 1; j <= 3; ++j)
      out.t(i - 1, j - 1) = (m * kron(pauli(i), pauli(j))).trace().real();
  }
  return out;
}

DensityMatrix from_bloch(const BlochForm& b) {
  const Mat2 id = Mat2::Identity();
  Mat4 m = kron(id, id);
  for (int i = 1; i <= 3; ++i) {
    m += b.x(i - 1) * kron(pauli(i), id);
    m += b.y(i - 1) * kron(id, pauli(i));
    for (int j = 1; j <= 3; ++j)
      m += b.t(i - 1, j - 1) * kron(pauli(i), pauli(j));
  }
  return DensityMatrix(0.25 * m);
}

Mat4 partial_transpose(const Mat4& m) {
  // Transpose each 2x2 block over the second-qubit indices.
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
  return out;
}

Mat4 partial_transpose(const DensityMatrix& rho) {
  return partial_transpose(rho.matrix());
}

Spectrum spectrum(const Mat4& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (hermitian + hermitian.adjoint()));
  Spectrum s;
  // Eigen sorts ascending; flip to descending.
  for (int i = 0; i < 4; ++i) {
    s.eigenvalues(i) = es.eigenvalues()(3 - i);
    s.eigenvectors.col(i) = es.eigenvectors().col(3 - i);
  }
  return s;
}

Spectrum spectrum(const DensityMatrix& rho) { return spectrum(rho.matrix()); }

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const Spectrum sr = spectrum(rho);
  const Spectrum ss = spectrum(sigma);

  double value = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double p = sr.eigenvalues(i);
    if (p <= kSupportTol) continue;
    value += p * std::log2(p);
  }
  for (int j = 0; j < 4; ++j) {
    const double q = ss.eigenvalues(j);
    double mass = 0.0;  // <f_j| rho |f_j>
    for (int i = 0; i < 4; ++i) {
      const double p = sr.eigenvalues(i);
      if (p <= kSupportTol) continue;
      mass += p * std::norm(sr.eigenvectors.col(i).dot(ss.eigenvectors.col(j)));
    }
    if (q <= kSupportTol) {
      if (mass > kSupportTol) return std::numeric_limits<double>::infinity();
      continue;
    }
    value -= mass * std::log2(q);
  }
  return value;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Spectrum s = spectrum(rho);
  double h = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double p = s.eigenvalues(i);
    if (p > kSupportTol) h -= p * std::log2(p);
  }
  return h;
}

Mat2 reduced_state(const DensityMatrix& rho, int qubit) {
  if (qubit != 1 && qubit != 2)
    throw DomainError("reduced_state: qubit index must be 1 or 2");
  const Mat4& m = rho.matrix();
  Mat2 out = Mat2::Zero();
  if (qubit == 1) {
    // trace out qubit 2
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  } else {
    // trace out qubit 1
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out(i, j) = m(i, j) + m(2 + i, 2 + j);
  }
  return out;
}

namespace {

Mat4 ginibre_sample(std::mt19937_64& rng, int rank) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
  Mat4 m = g * g.adjoint();
  return m / m.trace().real();
}

}  // namespace

DensityMatrix sample_state(std::uint64_t seed, int rank) {
  if (rank < 1 || rank > 4) throw DomainError("sample_state: rank must be 1..4");
  std::mt19937_64 rng(seed);
  return DensityMatrix(ginibre_sample(rng, rank));
}

DensityMatrix sample_mixture(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u = uni(rng);
  int rank = 4;
  if (u < 0.1)
    rank = 1;
  else if (u < 0.4)
    rank = 2;
  else if (u < 0.6)
    rank = 3;
  return DensityMatrix(ginibre_sample(rng, rank));
}

PureState sample_pure(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec4 k;
  for (int i = 0; i < 4; ++i) k(i) = Complex{gauss(rng), gauss(rng)};
  k.normalize();
  return PureState(k(0), k(1), k(2), k(3));
}

DensityMatrix parse_state_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("state file is not valid JSON: ") + e.what());
  }
  if (!j.contains("re") || !j.contains("im"))
    throw DomainError("state file must contain \"re\" and \"im\" 4x4 arrays");
  Mat4 m;
  for (const char* key : {"re", "im"}) {
    const auto& part = j.at(key);
    if (!part.is_array() || part.size() != 4)
      throw DomainError(std::string("state file \"") + key +
                        "\" must be a 4x4 array");
    for (int r = 0; r < 4; ++r) {
      const auto& row = part.at(r);
      if (!row.is_array() || row.size() != 4)
        throw DomainError(std::string("state file \"") + key +
                          "\" must be a 4x4 array");
      for (int c = 0; c < 4; ++c) {
        const double v = row.at(c).get<double>();
        if (key[0] == 'r')
          m(r, c) = Complex{v, 0.0};
        else
          m(r, c) += Complex{0.0, v};
      }
    }
  }
  return DensityMatrix(m);
}

std::string state_to_json(const DensityMatrix& rho) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      re_row.push_back(rho(r, c).real());
      im_row.push_back(rho(r, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  nlohmann::json j;
  j["re"] = re;
  j["im"] = im;
  return j.dump(2);
}

DensityMatrix load_state_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open state file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_state_json(ss.str());
}

void save_state_json(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write state file: " + path);
  out << state_to_json(rho) << "\n";
}

}  // namespace entfrontier
