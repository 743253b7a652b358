/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "entfrontier/channels.hpp"
#include "entfrontier/measures.hpp"

using namespace entfrontier;

namespace {

DensityMatrix horodecki_state(double p) { return adc_state(0.5, p).rho; }

// direct CHSH maximization over random measurement quadruples; independent
// oracle for the Horodecki-theorem value
double random_settings_max(const BlochForm& b, std::mt19937_64& rng, int tries) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto unit = [&] {
    Vec3 v;
    do {
      v << gauss(rng), gauss(rng), gauss(rng);
    } while (v.norm() < 1e-8);
    return Vec3(v / v.norm());
  };
  double best = 0.0;
  for (int k = 0; k < tries; ++k) {
    const Vec3 a = unit(), ap = unit(), bb = unit(), bp = unit();
    const double e = a.dot(b.t * (bb + bp)) + ap.dot(b.t * (bb - bp));
    best = std::max(best, std::abs(e));
  }
  return best;
}

}  // namespace

TEST_CASE("concurrence") {
  CHECK(concurrence(PureState::psi_plus().density()) == doctest::Approx(1.0));

  for (double p : {0.1, 0.4, 0.7, 1.0})
    CHECK(concurrence(horodecki_state(p)) == doctest::Approx(p).epsilon(1e-10));

  // damped-state closed form 2 p sqrt(a'(1-a'))
  for (double a : {0.2, 0.35})
    for (double p : {0.6, 0.9}) {
      const double expected = 2.0 * p * std::sqrt(a * (1.0 - a));
      CHECK(concurrence(adc_state(a, p).rho) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("negativity") {
  CHECK(negativity(horodecki_state(1.0)) == doctest::Approx(1.0));
  CHECK(negativity(horodecki_state(0.5)) ==
        doctest::Approx(std::sqrt(0.5) - 0.5).epsilon(1e-10));
  for (double p : {0.3, 0.8}) {
    const double expected =
        std::sqrt((1.0 - p) * (1.0 - p) + p * p) - (1.0 - p);
    CHECK(negativity(horodecki_state(p)) == doctest::Approx(expected));
  }

  Mat4 product = Mat4::Zero();
  product(0, 0) = 1.0;
  CHECK(negativity(DensityMatrix(product)) == 0.0);
  CHECK(negativity(DensityMatrix()) == 0.0);
}

TEST_CASE("horodecki M and nonlocality B") {
  CHECK(horodecki_m(PureState::psi_plus().density()) == doctest::Approx(2.0));
  CHECK(horodecki_m(DensityMatrix()) == doctest::Approx(0.0));

  for (double p : {0.4, 1.0 / std::sqrt(2.0), 0.9}) {
    const double w = (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    const double expected = p * p + std::max(p * p, w);
    CHECK(horodecki_m(horodecki_state(p)) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(horodecki_m(horodecki_state(1.0 / std::sqrt(2.0))) ==
        doctest::Approx(1.0));

  for (double p : {0.5, 0.75, 0.95})
    CHECK(nonlocality_b(horodecki_state(p)) ==
          doctest::Approx(std::sqrt(std::max(0.0, 2.0 * p * p - 1.0))));

  // pure states: B = 2|ad - bc|
  for (int i = 0; i < 10; ++i) {
    const PureState psi = sample_pure(50 + i);
    const double expected = 2.0 * std::abs(psi.a * psi.d - psi.b * psi.c);
    CHECK(nonlocality_b(psi.density()) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("bell_diagonal_b") {
  CHECK(bell_diagonal_b(1, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(bell_diagonal_b(0.25, 0.25, 0.25, 0.25) == doctest::Approx(0.0));
  for (double p : {0.1, 0.5, 0.8})
    CHECK(bell_diagonal_b(p, 1.0 - p, 0, 0) ==
          doctest::Approx(std::abs(2.0 * p - 1.0)));
  CHECK_THROWS_AS(bell_diagonal_b(0.5, 0.6, 0, 0), DomainError);

  SUBCASE("consistent with the generic measure on Bell-diagonal states") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      double l[4], sum = 0.0;
      for (double& v : l) {
        v = -std::log(uni(rng));
        sum += v;
      }
      for (double& v : l) v /= sum;
      Mat4 m = Mat4::Zero();
      for (int k = 0; k < 4; ++k)
        m += l[k] * (bell_basis().col(k) * bell_basis().col(k).adjoint());
      CHECK(bell_diagonal_b(l[0], l[1], l[2], l[3]) ==
            doctest::Approx(nonlocality_b(DensityMatrix(m))).epsilon(1e-9));
    }
  }
}

TEST_CASE("chsh_operator achieves the Horodecki bound") {
  SUBCASE("Tsirelson value on a Bell state") {
    const DensityMatrix bell = PureState::psi_plus().density();
    const ChshOperator op = chsh_operator(bell);
    CHECK((op.op * bell.matrix()).trace().real() ==
          doctest::Approx(2.0 * std::sqrt(2.0)));
  }
  SUBCASE("matches the closed-form operator expectation on psi+-psi- mixtures") {
    for (double p : {0.6, 0.8, 0.95}) {
      const CVec4 plus = PureState::psi_plus().ket();
      const CVec4 minus = PureState::psi_minus().ket();
      const DensityMatrix rho(Mat4(p * (plus * plus.adjoint()) +
                                   (1.0 - p) * (minus * minus.adjoint())));
      const double w = 2.0 * p - 1.0;
      const double eta = 2.0 / std::sqrt(1.0 + w * w);
      const Mat4 closed =
          eta * (-kron(pauli(3), pauli(3)) + w * kron(pauli(1), pauli(1)));
      const double expect_generic =
          (chsh_operator(rho).op * rho.matrix()).trace().real();
      const double expect_closed = (closed * rho.matrix()).trace().real();
      CHECK(expect_generic == doctest::Approx(expect_closed).epsilon(1e-12));
    }
  }
  SUBCASE("equals 2 sqrt(M) and bounds random settings on sampled states") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
      const DensityMatrix rho = sample_mixture(2000 + i);
      const ChshOperator op = chsh_operator(rho);
      const double expect = (op.op * rho.matrix()).trace().real();
      const double bound = 2.0 * std::sqrt(horodecki_m(rho));
      CHECK(std::abs(expect - bound) < 1e-8);
      CHECK(op.a.norm() == doctest::Approx(1.0));
      CHECK(op.a_prime.norm() == doctest::Approx(1.0));
      CHECK(op.b.norm() == doctest::Approx(1.0));
      CHECK(op.b_prime.norm() == doctest::Approx(1.0));
      if (i < 40) {
        const double sampled =
            random_settings_max(to_bloch(rho), rng, 200);
        CHECK(sampled <= bound + 1e-6);
      }
    }
  }
  SUBCASE("degenerate flag on isotropic correlations") {
    CHECK(chsh_operator(PureState::psi_plus().density()).degenerate);
    CHECK(chsh_operator(DensityMatrix()).degenerate);
  }
}

TEST_CASE("binary entropy and the Wootters function") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK_THROWS_AS(binary_entropy(1.1), DomainError);

  CHECK(wootters_w(1.0) == doctest::Approx(1.0));
  CHECK(wootters_w(0.0) == 0.0);
  CHECK(wootters_w(0.5856) == doctest::Approx(0.4520).epsilon(2e-4));
  CHECK_THROWS_AS(wootters_w(-0.2), DomainError);
}

TEST_CASE("purity") {
  CHECK(purity(DensityMatrix()) == doctest::Approx(0.25));
  CHECK(purity(PureState::psi_plus().density()) == doctest::Approx(1.0));
  CHECK(purity(horodecki_state(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("pure-state measure identities") {
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = sample_pure(9000 + i).density();
    const MeasureSet ms = measure_set(rho);
    CHECK(std::abs(ms.concurrence - ms.negativity) < 1e-10);
    CHECK(std::abs(ms.concurrence - ms.nonlocality) < 1e-10);
    // Gisin: entangled pure states violate the inequality
    if (ms.concurrence > 1e-9) CHECK(ms.nonlocality > 0.0);
  }
}

TEST_CASE("a PPT state never violates the inequality") {
  for (int i = 0; i < 150; ++i) {
    const DensityMatrix rho = sample_mixture(6200 + i);
    Eigen::SelfAdjointEigenSolver<Mat4> pt(partial_transpose(rho),
                                           Eigen::EigenvaluesOnly);
    const MeasureSet ms = measure_set(rho);
    if (pt.eigenvalues().minCoeff() >= -1e-9) CHECK(ms.nonlocality == 0.0);
    // B > 0 iff M > 1
    CHECK((ms.nonlocality > 0.0) == (ms.horodecki_m > 1.0));
  }
}

TEST_CASE("measure-set bounds and relations on random states") {
  for (int i = 0; i < 300; ++i) {
    const MeasureSet ms = measure_set(sample_mixture(5000 + i));
    CHECK(ms.concurrence >= 0.0);
    CHECK(ms.concurrence <= 1.0 + 1e-9);
    CHECK(ms.negativity <= ms.concurrence + 1e-9);
    CHECK(ms.horodecki_m >= -1e-9);
    CHECK(ms.horodecki_m <= 2.0 + 1e-9);
    CHECK(ms.nonlocality ==
          doctest::Approx(std::sqrt(std::max(0.0, ms.horodecki_m - 1.0))));
    CHECK(ms.purity >= 0.25 - 1e-9);
    CHECK(ms.purity <= 1.0 + 1e-9);
  }
}
