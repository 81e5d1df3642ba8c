#include <cmath>
#include <random>

#include "coop/errors.hpp"
#include "coop/stability.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coop;
using doctest::Approx;

namespace {

Verdict verdict_of(const EquilibriumReport& rep, EquilibriumKind kind) {
  const auto* e = rep.find(kind);
  REQUIRE(e != nullptr);
  REQUIRE(e->verdict.has_value());
  return e->verdict->tag;
}

}  // namespace

TEST_CASE("qh threshold") {
  CHECK(qh_threshold({0.5, 1.5, 0.0}) == 4.0);
  CHECK(qh_threshold({2.0, 0.8, 0.0}) == Approx(7.84 / 1.8).epsilon(1e-15));
  CHECK_THROWS_AS(qh_threshold({0.2, 0.5, 0.0}), UndefinedThreshold);
  CHECK_THROWS_AS(qh_threshold({0.5, 0.5, 0.0}), UndefinedThreshold);

  SUBCASE("tr(J+) vanishes at q_h") {
    const ScaledParams prm{2.0, 0.8, qh_threshold({2.0, 0.8, 0.0})};
    const auto rep = analyze(prm);
    CHECK(std::abs(rep.find(EquilibriumKind::PositivePlus)->trace) < 1e-12);
  }
}

TEST_CASE("b threshold") {
  CHECK(b_threshold(0.8) == Approx(0.470156211871642434).epsilon(1e-14));
  CHECK(b_threshold(0.5) == Approx(0.890388203202207569).epsilon(1e-14));
  CHECK(b_threshold(1.0) == 0.0);
  CHECK_THROWS_AS(b_threshold(1.2), UndefinedThreshold);
  // q_h - q0 has a double zero at b*: it is positive on both sides.
  for (double p : {0.2, 0.6, 0.95}) {
    const double bt = b_threshold(p);
    const double at = qh_threshold({bt, p, 0}), q0 = q0_threshold({bt, p, 0});
    CHECK(std::abs(at - q0) <= 1e-12 * q0);
    for (double f : {0.99, 1.01}) {
      const ScaledParams prm{bt * f, p, 0};
      if (prm.b + p <= 1.0) continue;
      CHECK(qh_threshold(prm) > q0_threshold(prm));
    }
  }
}

TEST_CASE("eigenvalues from trace and determinant") {
  auto ev = eigenvalues_from(0.0, 0.25);
  CHECK(ev[0].real() == 0.0);
  CHECK(ev[0].imag() == Approx(0.5));
  CHECK(ev[1] == std::conj(ev[0]));
  ev = eigenvalues_from(-3.0, 2.0);
  CHECK(ev[0].real() == Approx(-1.0));
  CHECK(ev[1].real() == Approx(-2.0));
  ev = eigenvalues_from(1e8, 1.0);  // no cancellation in the small root
  CHECK(ev[1].real() == Approx(1e-8).epsilon(1e-12));
  ev = eigenvalues_from(0.0, 0.0);
  CHECK(ev[0] == 0.0);
}

TEST_CASE("classify_boundary") {
  CHECK(classify_boundary({1.0, 0.5, 10.0}).e0.tag == Verdict::Unstable);
  CHECK(classify_boundary({1.0, 0.5, 10.0}).e1.tag == Verdict::Stable);
  CHECK(classify_boundary({1.0, 1.5, 0.0}).e1.tag == Verdict::Unstable);
  const auto critical = classify_boundary({1.0, 1.0, 1.0});
  CHECK(critical.e1.tag == Verdict::Stable);
  CHECK(critical.e1.witness.find("critically stable") != std::string::npos);
  CHECK(classify_boundary({1.0, 1.0, 0.5}).e1.tag == Verdict::Stable);
  CHECK(classify_boundary({1.0, 1.0, 1.5}).e1.tag == Verdict::Unstable);
  CHECK(classify_boundary({2.0, 1.0, 0.5}).e1.tag == Verdict::Stable);
  CHECK(classify_boundary({2.0, 1.0, 0.51}).e1.tag == Verdict::Unstable);
}

TEST_CASE("classify_positive") {
  SUBCASE("either side of the Hopf point") {
    CHECK(verdict_of(analyze({0.5, 1.5, 3.99}), EquilibriumKind::PositivePlus) == Verdict::Stable);
    CHECK(verdict_of(analyze({0.5, 1.5, 4.01}), EquilibriumKind::PositivePlus) == Verdict::Unstable);
    CHECK(verdict_of(analyze({0.5, 1.5, 4.0}), EquilibriumKind::PositivePlus) == Verdict::HopfCritical);
  }
  SUBCASE("bistable parameters against independently located equilibria") {
    const ScaledParams prm{2.0, 0.8, 3.0};
    const auto rep = analyze(prm);
    CHECK(verdict_of(rep, EquilibriumKind::PositiveMinus) == Verdict::Unstable);
    CHECK(verdict_of(rep, EquilibriumKind::PositivePlus) == Verdict::Stable);
    CHECK(verdict_of(rep, EquilibriumKind::PredatorFree) == Verdict::Stable);
    REQUIRE(rep.b_threshold.has_value());
    CHECK(*rep.b_threshold == Approx(0.470156211871642434));
    const auto oracle = testing::companion_roots_above_one(0.8, 6.0);
    REQUIRE(oracle.size() == 2);
    for (double s : oracle) {
      const State e{1.0 / s, prm.b * (s - 1.0) / (s * s)};
      const Matrix2 J = jacobian_fd_oracle(prm, e, 1e-6);
      const double tr = trace(J), det = determinant(J);
      if (s == oracle[0]) {
        CHECK(det < 0.0);
      } else {
        CHECK(det > 0.0);
        CHECK(tr < 0.0);
      }
    }
  }
  SUBCASE("b below b_threshold makes E+ unstable for every q") {
    for (double q : {3.0, 5.0, 20.0}) {
      const auto rep = analyze({0.3, 0.5, q});
      if (rep.existence != ExistenceClass::TwoPositive) continue;
      CHECK(verdict_of(rep, EquilibriumKind::PositivePlus) == Verdict::Unstable);
      CHECK(rep.find(EquilibriumKind::PositivePlus)->trace > 0.0);
    }
  }
  SUBCASE("b on b_threshold is reported, not guessed") {
    const double bt = b_threshold(0.5);
    const auto rep = analyze({bt, 0.5, 10.0});
    REQUIRE(rep.existence == ExistenceClass::TwoPositive);
    CHECK(verdict_of(rep, EquilibriumKind::PositivePlus) == Verdict::UnclassifiedByPaper);
  }
  SUBCASE("the degenerate double equilibrium is unclassified") {
    const double q0 = q0_threshold({1.0, 0.5, 0.0});
    const auto rep = analyze({1.0, 0.5, q0});
    CHECK(rep.existence == ExistenceClass::DegenerateDouble);
    CHECK(verdict_of(rep, EquilibriumKind::PositivePlus) == Verdict::UnclassifiedByPaper);
  }
}

TEST_CASE("report markers") {
  const auto rep = analyze({0.5, 1.5, 3.0});
  CHECK_FALSE(rep.q0);
  CHECK_FALSE(rep.b_threshold);
  REQUIRE(rep.qh);
  CHECK(*rep.qh == 4.0);
  const auto lo = analyze({0.2, 0.5, 3.0});
  CHECK_FALSE(lo.qh);
  CHECK(lo.q0);
}

TEST_CASE("property: Jacobian identities and verdict consistency") {
  std::mt19937_64 rng(99);
  int stable = 0, unstable = 0;
  for (int k = 0; k < 10000; ++k) {
    const ScaledParams prm{testing::draw(rng, 0, 10), testing::draw(rng, 0, 3), testing::draw(rng, 0, 10)};
    const auto rep = analyze(prm);
    for (const auto& e : rep.equilibria) {
      REQUIRE(e.verdict.has_value());
      const auto& ev = e.eigenvalues;
      REQUIRE(std::abs((ev[0] * ev[1]).real() - e.determinant) <= 1e-10 * std::max(1.0, std::abs(e.determinant)));
      REQUIRE(std::abs((ev[0] + ev[1]).real() - e.trace) <= 1e-10 * std::max(1.0, std::abs(e.trace)));
      if (e.s) {
        const double s = *e.s, u = e.point.u, v = e.point.v;
        const CubicF f = CubicF::from(prm);
        REQUIRE(std::abs(e.determinant - u * v * f.derivative(s)) <= 1e-10);
        REQUIRE(std::abs(e.trace - u * (prm.q * v - prm.b)) <= 1e-10);
        // Below b* the trace stays positive on all of (q0, q_h), so the sign rule needs b > b*.
        const bool switches = prm.p > 1.0 || prm.b > 1.000001 * b_threshold(prm.p);
        if (e.kind == EquilibriumKind::PositivePlus && rep.qh && switches &&
            rep.existence != ExistenceClass::DegenerateDouble && std::abs(prm.q - *rep.qh) > 1e-6) {
          REQUIRE((e.trace > 0.0) == (prm.q > *rep.qh));
        }
        if (e.kind == EquilibriumKind::PositivePlus && prm.p < 1.0 && prm.b < 0.999999 * b_threshold(prm.p) &&
            rep.existence == ExistenceClass::TwoPositive) {
          REQUIRE(e.trace > 0.0);
        }
      }
      const bool hyperbolic = std::abs(ev[0].real()) > 1e-12 && std::abs(ev[1].real()) > 1e-12;
      if (e.verdict->tag == Verdict::Stable && hyperbolic) {
        ++stable;
        REQUIRE(ev[0].real() < 0.0);
        REQUIRE(ev[1].real() < 0.0);
      } else if (e.verdict->tag == Verdict::Unstable) {
        ++unstable;
        REQUIRE((ev[0].real() > 0.0 || ev[1].real() > 0.0 || e.determinant < 0.0));
      }
    }
  }
  CHECK(stable > 1000);
  CHECK(unstable > 1000);
}

TEST_CASE("classify_nonscaled") {
  SUBCASE("stable regime in original units") {
    const auto rep = classify_nonscaled({0.5, 1.0, 1.5, 3.99, 1.0, 1.0});
    CHECK(rep.thresholds.r0 == 1.5);
    REQUIRE(rep.thresholds.hopf_bound);
    CHECK(*rep.thresholds.hopf_bound == 4.0);
    CHECK(rep.scaled_report.existence == ExistenceClass::UniquePositive);
    CHECK(verdict_of(rep.scaled_report, EquilibriumKind::PositivePlus) == Verdict::Stable);
  }
  SUBCASE("no positive equilibrium") {
    const auto rep = classify_nonscaled({1.0, 1.0, 0.5, 1.0, 1.0, 1.0});
    CHECK(rep.thresholds.r0 == 0.5);
    CHECK(rep.scaled_report.existence == ExistenceClass::NonePositive);
    REQUIRE(rep.thresholds.existence_bound);
    CHECK(rep.thresholds.existence_lhs < *rep.thresholds.existence_bound);
  }
  SUBCASE("R0 = 1 critical case") {
    // C P K = D with B C^2 Q K^2 < D^2.
    const auto rep = classify_nonscaled({0.5, 2.0, 1.0, 0.1, 0.5, 1.0});
    CHECK(rep.thresholds.r0 == 1.0);
    CHECK(rep.thresholds.critical_lhs < rep.thresholds.critical_bound);
    CHECK(verdict_of(rep.scaled_report, EquilibriumKind::PredatorFree) == Verdict::Stable);
  }
  SUBCASE("coordinates and eigenvalues map back") {
    const RawParams raw{1.2, 3.0, 0.4, 0.3, 0.8, 0.7};
    const auto rep = classify_nonscaled(raw);
    REQUIRE(rep.equilibria.size() == rep.scaled_report.equilibria.size());
    for (std::size_t i = 0; i < rep.equilibria.size(); ++i) {
      const auto& re = rep.equilibria[i];
      const auto& se = rep.scaled_report.equilibria[i];
      CHECK(re.point.U == Approx(raw.K * se.point.u));
      CHECK(re.point.V == Approx(raw.C * raw.K * se.point.v));
      const RawRates r = raw_vector_field(raw, re.point);
      CHECK(std::abs(r.dU) < 1e-9);
      CHECK(std::abs(r.dV) < 1e-9);
    }
  }
  SUBCASE("property: non-scaled inequalities reproduce the scaled verdicts") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 2000; ++k) {
      const RawParams raw{testing::draw(rng, 0, 3), testing::draw(rng, 0, 3), testing::draw(rng, 0, 3),
                          testing::draw(rng, 0, 3), testing::draw(rng, 0, 1), testing::draw(rng, 0.1, 3)};
      const auto rep = classify_nonscaled(raw);
      const auto& t = rep.thresholds;
      const auto& sr = rep.scaled_report;
      if (t.r0 > 1.0) {
        REQUIRE(sr.existence == ExistenceClass::UniquePositive);
        REQUIRE(t.hopf_bound);
        const Verdict v = verdict_of(sr, EquilibriumKind::PositivePlus);
        if (std::abs(t.cooperation - *t.hopf_bound) > 1e-6 * *t.hopf_bound)
          REQUIRE((v == Verdict::Stable) == (t.cooperation < *t.hopf_bound));
      } else if (t.r0 < 1.0) {
        REQUIRE(t.existence_bound);
        if (std::abs(t.existence_lhs - *t.existence_bound) < 1e-6 * *t.existence_bound) continue;
        REQUIRE((sr.existence == ExistenceClass::TwoPositive) == (t.existence_lhs > *t.existence_bound));
        if (sr.existence == ExistenceClass::TwoPositive) {
          const Verdict v = verdict_of(sr, EquilibriumKind::PositivePlus);
          if (t.birth_lhs < *t.birth_bound) REQUIRE(v == Verdict::Unstable);
          if (t.hopf_bound && t.birth_lhs > *t.birth_bound &&
              std::abs(t.cooperation - *t.hopf_bound) > 1e-6 * *t.hopf_bound)
            REQUIRE((v == Verdict::Stable) == (t.cooperation < *t.hopf_bound));
        }
      }
    }
  }
}
