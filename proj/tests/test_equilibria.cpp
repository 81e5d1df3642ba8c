#include <algorithm>
#include <cmath>
#include <random>

#include "coop/equilibria.hpp"
#include "coop/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coop;
using doctest::Approx;

namespace {

double residual_bound(double s) { return 1e-12 * std::max(1.0, std::abs(s * s * s)); }

double linf(Rates r) { return std::max(std::abs(r.du), std::abs(r.dv)); }

}  // namespace

TEST_CASE("q0 threshold") {
  CHECK(q0_threshold({1.0, 1.0, 0.0}) == Approx(1.0).epsilon(1e-15));
  CHECK(q0_threshold({2.0, 1.0, 0.0}) == Approx(0.5).epsilon(1e-15));
  CHECK(q0_threshold({1.0, 0.0 + 1e-300, 0.0}) == Approx(6.75).epsilon(1e-14));
  // Frozen from a 30-digit evaluation of the closed form.
  CHECK(q0_threshold({1.0, 0.5, 0.0}) == Approx(4.40914986360938216).epsilon(1e-14));
  CHECK(q0_threshold({2.0, 0.8, 0.0}) == Approx(1.40382023433686699).epsilon(1e-14));
  CHECK_THROWS_AS(q0_threshold({1.0, 1.5, 0.0}), UndefinedThreshold);

  SUBCASE("f has a double root above 1 at q0") {
    for (double p : {0.1, 0.5, 0.9}) {
      const ScaledParams prm{1.3, p, q0_threshold({1.3, p, 0.0})};
      const CubicF f = CubicF::from(prm);
      const double s2 = f.critical_high();
      CHECK(s2 > 1.0);
      CHECK(std::abs(f(s2)) < 1e-12);
      CHECK(std::abs(f.derivative(s2)) < 1e-12);
    }
  }
}

TEST_CASE("cubic critical points") {
  const CubicF f{0.8, 6.0};
  CHECK(f.critical_low() < 0.0);
  CHECK(f.critical_high() > 0.0);
  CHECK(std::abs(f.derivative(f.critical_low())) < 1e-12);
  CHECK(std::abs(f.derivative(f.critical_high())) < 1e-12);
  CHECK(f(0.0) == 6.0);
  const CubicF lv{2.0, 0.0};
  CHECK(lv.critical_low() == 0.0);
}

TEST_CASE("classify_roots") {
  SUBCASE("unique root at the Hopf example") {
    const auto rc = classify_roots({0.5, 1.5, 4.0});
    CHECK(rc.cls == ExistenceClass::UniquePositive);
    REQUIRE(rc.roots.size() == 1);
    CHECK(rc.roots[0] == Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("zero cooperation") {
    const auto rc = classify_roots({1.0, 2.0, 0.0});
    CHECK(rc.cls == ExistenceClass::UniquePositive);
    REQUIRE(rc.roots.size() == 1);
    CHECK(rc.roots[0] == Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("two roots") {
    const auto rc = classify_roots({2.0, 0.8, 3.0});
    CHECK(rc.cls == ExistenceClass::TwoPositive);
    REQUIRE(rc.roots.size() == 2);
    CHECK(rc.roots[0] == Approx(1.04444194953113906).epsilon(1e-13));
    CHECK(rc.roots[1] == Approx(2.27770246992118772).epsilon(1e-13));
    const CubicF f = CubicF::from({2.0, 0.8, 3.0});
    for (double s : rc.roots) CHECK(std::abs(f(s)) <= residual_bound(s));
    CHECK(f.derivative(rc.roots[0]) < 0.0);
    CHECK(f.derivative(rc.roots[1]) > 0.0);
  }
  SUBCASE("none below q0") {
    const auto rc = classify_roots({1.0, 0.5, 1.0});
    CHECK(rc.cls == ExistenceClass::NonePositive);
    CHECK(rc.roots.empty());
    CHECK(testing::companion_roots_above_one(0.5, 1.0).empty());
  }
  SUBCASE("degenerate double root inside the band") {
    const double q0 = q0_threshold({1.0, 0.5, 0.0});
    const auto rc = classify_roots({1.0, 0.5, q0 * (1 + 5e-10)});
    CHECK(rc.cls == ExistenceClass::DegenerateDouble);
    CHECK(rc.multiplicity == 2);
    REQUIRE(rc.roots.size() == 1);
    CHECK(rc.roots[0] > 1.0);
    CHECK(classify_roots({1.0, 0.5, q0 * (1 - 2e-9)}).cls == ExistenceClass::NonePositive);
    CHECK(classify_roots({1.0, 0.5, q0 * (1 + 2e-9)}).cls == ExistenceClass::TwoPositive);
  }
  SUBCASE("p = 1 critical case") {
    // f(s) = (s-1)(s^2-qb): single root sqrt(qb) above 1, none at q = 1/b.
    CHECK(classify_roots({1.0, 1.0, 1.0}).cls == ExistenceClass::NonePositive);
    CHECK(classify_roots({1.0, 1.0, 0.5}).cls == ExistenceClass::NonePositive);
    const auto rc = classify_roots({1.0, 1.0, 4.0});
    CHECK(rc.cls == ExistenceClass::UniquePositive);
    REQUIRE(rc.roots.size() == 1);
    CHECK(rc.roots[0] == Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("classification tolerance is configurable") {
    const double q0 = q0_threshold({1.0, 0.5, 0.0});
    const ScaledParams prm{1.0, 0.5, q0 * (1 + 1e-6)};
    CHECK(classify_roots(prm).cls == ExistenceClass::TwoPositive);
    CHECK(classify_roots(prm, Tolerances{.classification = 1e-5}).cls == ExistenceClass::DegenerateDouble);
  }
}

TEST_CASE("real_roots covers all three roots") {
  const auto r = real_roots({0.8, 6.0});
  REQUIRE(r.size() == 3);
  CHECK(r[0] < 0.0);
  CHECK(std::is_sorted(r.begin(), r.end()));
  const auto lv = real_roots({2.0, 0.0});
  CHECK(lv.back() == Approx(2.0));
}

TEST_CASE("equilibria_for") {
  SUBCASE("Hopf example") {
    const auto rep = equilibria_for({0.5, 1.5, 4.0});
    REQUIRE(rep.equilibria.size() == 3);
    CHECK(rep.find(EquilibriumKind::Trivial)->point == State{0, 0});
    CHECK(rep.find(EquilibriumKind::PredatorFree)->point == State{1, 0});
    const auto* e = rep.find(EquilibriumKind::PositivePlus);
    REQUIRE(e != nullptr);
    CHECK(e->point.u == Approx(0.5).epsilon(1e-15));
    CHECK(e->point.v == Approx(0.125).epsilon(1e-15));
    CHECK_FALSE(rep.q0.has_value());
  }
  SUBCASE("no positive equilibria") {
    const auto rep = equilibria_for({1.0, 0.5, 1.0});
    CHECK(rep.equilibria.size() == 2);
    CHECK(rep.existence == ExistenceClass::NonePositive);
    REQUIRE(rep.q0.has_value());
    CHECK(*rep.q0 == Approx(4.40914986360938216));
  }
  SUBCASE("bistable parameters") {
    const ScaledParams prm{2.0, 0.8, 3.0};
    const auto rep = equilibria_for(prm);
    REQUIRE(rep.equilibria.size() == 4);
    const auto* minus = rep.find(EquilibriumKind::PositiveMinus);
    const auto* plus = rep.find(EquilibriumKind::PositivePlus);
    REQUIRE(minus);
    REQUIRE(plus);
    CHECK(minus->point.u == Approx(0.957449095614084136).epsilon(1e-13));
    CHECK(minus->point.v == Approx(0.0814806498437130201).epsilon(1e-12));
    CHECK(plus->point.u == Approx(0.439038905741978519).epsilon(1e-13));
    CHECK(plus->point.v == Approx(0.492567489973729241).epsilon(1e-13));
    CHECK(plus->point.u < minus->point.u);
    CHECK(minus->point.u < 1.0);
    CHECK(linf(vector_field(prm, plus->point)) <= 1e-10);
    CHECK(linf(vector_field(prm, minus->point)) <= 1e-10);
  }
}

TEST_CASE("property: classify_roots agrees with the companion-matrix oracle") {
  std::mt19937_64 rng(11);
  int two = 0, none = 0, unique = 0;
  for (int k = 0; k < 3000; ++k) {
    const ScaledParams prm{testing::draw(rng, 0, 10), testing::draw(rng, 0, 3), testing::draw(rng, 0, 10)};
    const auto rc = classify_roots(prm);
    const auto oracle = testing::companion_roots_above_one(prm.p, prm.q * prm.b);
    REQUIRE(rc.roots.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) REQUIRE(std::abs(rc.roots[i] - oracle[i]) <= 1e-8);
    const CubicF f = CubicF::from(prm);
    for (double s : rc.roots) REQUIRE(std::abs(f(s)) <= residual_bound(s));
    if (rc.cls == ExistenceClass::TwoPositive) {
      ++two;
      REQUIRE(f.derivative(rc.roots[0]) < 0.0);
      REQUIRE(f.derivative(rc.roots[1]) > 0.0);
      const auto rep = equilibria_for(prm);
      REQUIRE(rep.find(EquilibriumKind::PositivePlus)->point.u <
              rep.find(EquilibriumKind::PositiveMinus)->point.u);
      REQUIRE(rep.find(EquilibriumKind::PositiveMinus)->point.u < 1.0);
    }
    none += rc.cls == ExistenceClass::NonePositive;
    unique += rc.cls == ExistenceClass::UniquePositive;
  }
  CHECK(two > 50);
  CHECK(none > 50);
  CHECK(unique > 50);
}

TEST_CASE("property: the grid-scan oracle agrees on well-separated roots") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const ScaledParams prm{testing::draw(rng, 0, 10), testing::draw(rng, 0, 3), testing::draw(rng, 0, 10)};
    const auto rc = classify_roots(prm);
    if (prm.p <= 1.0 && std::abs(prm.q - q0_threshold(prm)) < 1e-3) continue;
    const auto scan = testing::scan_roots_above_one(prm.p, prm.q * prm.b, 20000);
    REQUIRE(scan.size() == rc.roots.size());
    for (std::size_t i = 0; i < scan.size(); ++i) REQUIRE(std::abs(rc.roots[i] - scan[i]) <= 1e-8);
  }
}

TEST_CASE("property: the class flips exactly at q0") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 500; ++k) {
    const double b = testing::draw(rng, 0, 10), p = testing::draw(rng, 0, 1.0);
    if (p == 1.0) continue;
    const double q0 = q0_threshold({b, p, 0.0});
    const double eps = 2e-9 * std::max(1.0, q0);
    REQUIRE(classify_roots({b, p, q0 - eps}).cls == ExistenceClass::NonePositive);
    REQUIRE(classify_roots({b, p, q0}).cls == ExistenceClass::DegenerateDouble);
    REQUIRE(classify_roots({b, p, q0 + eps}).cls == ExistenceClass::TwoPositive);
  }
}
