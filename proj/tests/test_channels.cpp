/*
 * This file is part of entfrontier.
 *
 * Licensed under the Apache License, Version 2.0; you may obtain a copy
 * of the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entfrontier/channels.hpp"
#include "entfrontier/measures.hpp"

using namespace entfrontier;

TEST_CASE("Kraus forms and completeness") {
  SUBCASE("amplitude damping") {
    const KrausChannel ch = adc_kraus(0.3);
    CHECK(ch.operators.size() == 2);
    CHECK(ch.operators[0](1, 1).real() == doctest::Approx(std::sqrt(0.7)));
    CHECK(ch.operators[1](0, 1).real() == doctest::Approx(std::sqrt(0.3)));

    const KrausChannel id = adc_kraus(0.0);
    CHECK((id.operators[0] - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(id.operators[1].cwiseAbs().maxCoeff() < 1e-15);

    // q = 1 sends |1><1| to |0><0|
    Mat4 excited = Mat4::Zero();
    excited(3, 3) = 1.0;
    const DensityMatrix out =
        apply_two_side(adc_kraus(1.0), adc_kraus(1.0), DensityMatrix(excited));
    CHECK(out(0, 0).real() == doctest::Approx(1.0));
  }
  SUBCASE("phase damping keeps populations") {
    Mat4 plus2 = Mat4::Ones() * 0.25;  // |+>|+> state
    const DensityMatrix out =
        apply_two_side(pdc_kraus(0.6), pdc_kraus(0.2), DensityMatrix(plus2));
    for (int i = 0; i < 4; ++i)
      CHECK(out(i, i).real() == doctest::Approx(0.25));

    // full dephasing kills every coherence
    const DensityMatrix dead =
        apply_two_side(pdc_kraus(1.0), pdc_kraus(1.0), DensityMatrix(plus2));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c) CHECK(std::abs(dead(r, c)) < 1e-15);
  }
  CHECK_THROWS_AS(adc_kraus(1.5), DomainError);
  CHECK_THROWS_AS(pdc_kraus(-0.2), DomainError);
  CHECK_THROWS_AS(KrausChannel({Mat2::Identity(), Mat2::Identity()}, 0.0),
                  DomainError);
}

TEST_CASE("channel application basics") {
  const DensityMatrix bell = PureState::psi_plus().density();
  SUBCASE("identity channels act trivially") {
    const DensityMatrix out =
        apply_two_side(adc_kraus(0.0), pdc_kraus(0.0), bell);
    CHECK((out.matrix() - bell.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    const DensityMatrix one = apply_one_side(adc_kraus(0.0), bell);
    CHECK((one.matrix() - bell.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("one side equals two side with q2 = 0") {
    for (double q : {0.2, 0.7}) {
      const DensityMatrix a = apply_one_side(adc_kraus(q), bell);
      const DensityMatrix b = apply_two_side(adc_kraus(q), adc_kraus(0.0), bell);
      CHECK((a.matrix() - b.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("symmetric damping of a Bell state gives the vacuum mixture") {
    const double q = 0.35;
    const DensityMatrix out =
        apply_two_side(adc_kraus(q), adc_kraus(q), bell);
    const DensityMatrix ref = adc_state(0.5, 1.0 - q).rho;
    CHECK((out.matrix() - ref.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("trace preserved exactly across samples") {
    for (int i = 0; i < 10; ++i) {
      const DensityMatrix rho = sample_mixture(40 + i);
      const DensityMatrix out =
          apply_two_side(adc_kraus(0.3), pdc_kraus(0.4), rho);
      CHECK(out.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("closed forms match Kraus application to 1e-12") {
  for (double alpha : {0.0, 0.2, 0.5, 0.85, 1.0})
    for (double q1 : {0.0, 0.3, 0.9})
      for (double q2 : {0.0, 0.55, 1.0}) {
        const DensityMatrix in = PureState::psi_alpha(alpha).density();
        {
          const DensityMatrix direct =
              apply_two_side(adc_kraus(q1), adc_kraus(q2), in);
          const AdcState closed = adc_closed_form(alpha, q1, q2);
          CHECK((direct.matrix() - closed.rho.matrix()).cwiseAbs().maxCoeff() <
                1e-12);
        }
        {
          const DensityMatrix direct =
              apply_two_side(pdc_kraus(q1), pdc_kraus(q2), in);
          const PdcState closed = pdc_closed_form(alpha, q1, q2);
          CHECK((direct.matrix() - closed.rho.matrix()).cwiseAbs().maxCoeff() <
                1e-12);
        }
      }
}

TEST_CASE("adc closed form parameters") {
  SUBCASE("no damping returns the input") {
    const AdcState s = adc_closed_form(0.37, 0.0, 0.0);
    CHECK(s.p == doctest::Approx(1.0));
    CHECK(s.alpha_eff == doctest::Approx(0.37));
  }
  SUBCASE("symmetric damping of alpha = 1/2 keeps alpha' = 1/2") {
    const AdcState s = adc_closed_form(0.5, 0.3, 0.3);
    CHECK(s.alpha_eff == doctest::Approx(0.5));
    CHECK(s.p == doctest::Approx(0.7));
  }
  SUBCASE("balanced survivals give alpha' = 1/2") {
    // alpha p2 = (1 - alpha) p1 with alpha = 0.25: p2 = 3 p1
    const double p1 = 0.25, p2 = 0.75;
    const AdcState s = adc_closed_form(0.25, 1.0 - p1, 1.0 - p2);
    CHECK(s.alpha_eff == doctest::Approx(0.5));
  }
  SUBCASE("total damping flags the degenerate alpha'") {
    const AdcState s = adc_closed_form(0.4, 1.0, 1.0);
    CHECK(s.alpha_degenerate);
    CHECK(s.alpha_eff == 0.0);
    CHECK(s.p == doctest::Approx(0.0));
    CHECK(s.rho(0, 0).real() == doctest::Approx(1.0));
  }
  SUBCASE("alpha' stays within [0,1]") {
    for (double alpha : {0.1, 0.6, 0.95})
      for (double q1 : {0.05, 0.5, 0.95})
        for (double q2 : {0.1, 0.8}) {
          const AdcState s = adc_closed_form(alpha, q1, q2);
          CHECK(s.alpha_eff >= 0.0);
          CHECK(s.alpha_eff <= 1.0);
        }
  }
}

TEST_CASE("pdc closed form and the equal-measures property") {
  SUBCASE("no damping returns the input") {
    const PdcState s = pdc_closed_form(0.3, 0.0, 0.0);
    const DensityMatrix in = PureState::psi_alpha(0.3).density();
    CHECK((s.rho.matrix() - in.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("alpha = 1/2 reduces to a psi+/psi- mixture with B=N=C=2y") {
    const PdcState s = pdc_closed_form(0.5, 0.4, 0.4);
    const MeasureSet ms = measure_set(s.rho);
    CHECK(ms.concurrence == doctest::Approx(2.0 * s.y).epsilon(1e-10));
    CHECK(ms.negativity == doctest::Approx(2.0 * s.y).epsilon(1e-10));
    CHECK(ms.nonlocality == doctest::Approx(2.0 * s.y).epsilon(1e-10));
  }
  SUBCASE("B = N = C across the family") {
    for (double alpha : {0.2, 0.5, 0.8})
      for (double q1 : {0.1, 0.6})
        for (double q2 : {0.0, 0.45}) {
          const PdcState s = pdc_closed_form(alpha, q1, q2);
          const MeasureSet ms = measure_set(s.rho);
          CHECK(std::abs(ms.concurrence - ms.negativity) < 1e-10);
          CHECK(std::abs(ms.concurrence - ms.nonlocality) < 1e-10);
          CHECK(ms.concurrence == doctest::Approx(2.0 * s.y).epsilon(1e-9));
        }
  }
  SUBCASE("alpha = 1/(1 + p1 p2) gives the Bell-plus-|01> form") {
    const double p1 = 0.8, p2 = 0.5;
    const double alpha = 1.0 / (1.0 + p1 * p2);
    const PdcState s = pdc_closed_form(alpha, 1.0 - p1, 1.0 - p2);
    // effective pure state is the Bell state
    CHECK(s.alpha_eff == doctest::Approx(0.5).epsilon(1e-12));
    const double bprime = 2.0 * (1.0 - alpha);
    CHECK(measure_set(s.rho).nonlocality ==
          doctest::Approx(bprime).epsilon(1e-9));
  }
}

TEST_CASE("adc_measures closed forms") {
  SUBCASE("Bell state limit") {
    const MeasureSet ms = adc_measures(adc_state(0.5, 1.0));
    CHECK(ms.concurrence == doctest::Approx(1.0));
    CHECK(ms.negativity == doctest::Approx(1.0));
    CHECK(ms.nonlocality == doctest::Approx(1.0));
  }
  SUBCASE("reference rows") {
    const MeasureSet r4 = adc_measures(adc_state(0.3510, 0.9565));
    CHECK(r4.concurrence == doctest::Approx(0.9130).epsilon(1e-4));
    CHECK(r4.negativity == doctest::Approx(0.8706).epsilon(1e-4));
    CHECK(r4.nonlocality == doctest::Approx(0.8169).epsilon(1e-4));

    const MeasureSet r3 = adc_measures(adc_state(0.2198, 0.8536));
    CHECK(r3.nonlocality == doctest::Approx(0.0));
    CHECK(r3.concurrence == doctest::Approx(0.7070).epsilon(1e-4));
  }
  SUBCASE("cross-check against the generic measures") {
    for (double a : {0.1, 0.35, 0.5, 0.75})
      for (double p : {0.3, 0.7, 0.97}) {
        const AdcState s = adc_state(a, p);
        const MeasureSet closed = adc_measures(s);
        const MeasureSet generic = measure_set(s.rho);
        CHECK(std::abs(closed.concurrence - generic.concurrence) < 1e-10);
        CHECK(std::abs(closed.negativity - generic.negativity) < 1e-10);
        CHECK(std::abs(closed.nonlocality - generic.nonlocality) < 1e-10);
        CHECK(std::abs(closed.horodecki_m - generic.horodecki_m) < 1e-10);
      }
  }
}

TEST_CASE("bell basis decomposition") {
  SUBCASE("a Bell projector has a single unit coefficient") {
    const BellBasisForm f =
        bell_basis_decompose(PureState::psi_plus().density());
    CHECK(f.r_plus() == doctest::Approx(1.0));
    CHECK(std::abs(f.coefficients(0, 0)) < 1e-14);
    CHECK(std::abs(f.t()) < 1e-14);
  }
  SUBCASE("symmetric damping of a Bell state has no psi- weight") {
    const DensityMatrix out = apply_two_side(adc_kraus(0.3), adc_kraus(0.3),
                                             PureState::psi_plus().density());
    CHECK(std::abs(bell_basis_decompose(out).r_minus()) < 1e-14);
  }
  SUBCASE("asymmetric damping populates psi- as (sqrt(p1)-sqrt(p2))^2/4") {
    const double q1 = 0.2, q2 = 0.5;
    const DensityMatrix out = apply_two_side(adc_kraus(q1), adc_kraus(q2),
                                             PureState::psi_plus().density());
    const double d = std::sqrt(1.0 - q1) - std::sqrt(1.0 - q2);
    CHECK(bell_basis_decompose(out).r_minus() ==
          doctest::Approx(0.25 * d * d).epsilon(1e-12));
  }
  SUBCASE("adc coefficient formulas at general alpha") {
    const double alpha = 0.3, q1 = 0.25, q2 = 0.6;
    const AdcState s = adc_closed_form(alpha, q1, q2);
    const BellBasisForm f = bell_basis_decompose(s.rho);
    const double r = 0.5 * ((1.0 - alpha) * q1 + alpha * q2);
    const double c = adc_measures(s).concurrence;
    CHECK(f.r() == doctest::Approx(r).epsilon(1e-12));
    CHECK(f.r_plus() == doctest::Approx(0.5 * (1.0 - 2.0 * r + c)));
    CHECK(f.r_minus() == doctest::Approx(0.5 * (1.0 - 2.0 * r - c)));
    CHECK(f.t().real() ==
          doctest::Approx(alpha * (1.0 - q2) + r - 0.5).epsilon(1e-12));
    // the second off-diagonal pair carries the same r
    CHECK(f.coefficients(3, 2).real() == doctest::Approx(r).epsilon(1e-12));
  }
  SUBCASE("pdc at alpha = 1/2 is diagonal with weights 1/2 +- y") {
    const PdcState s = pdc_closed_form(0.5, 0.3, 0.2);
    const BellBasisForm f = bell_basis_decompose(s.rho);
    CHECK(f.r_minus() == doctest::Approx(0.5 - s.y));
    CHECK(f.r_plus() == doctest::Approx(0.5 + s.y));
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) off = std::max(off, std::abs(f.coefficients(i, j)));
    CHECK(off < 1e-14);
  }
  SUBCASE("reconstruction is exact") {
    for (int i = 0; i < 20; ++i) {
      const DensityMatrix rho = sample_mixture(600 + i);
      CHECK((bell_basis_decompose(rho).reconstruct() - rho.matrix())
                .cwiseAbs()
                .maxCoeff() < 1e-12);
    }
  }
}
