#include <random>

#include "coop/errors.hpp"
#include "coop/model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coop;
using doctest::Approx;

namespace {

void check_matrix(const Matrix2& got, const Matrix2& want, double tol) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(got[i][j] - want[i][j]) <= tol);
}

}  // namespace

TEST_CASE("nondimensionalize") {
  SUBCASE("identity scaling") {
    const ScaledParams s = nondimensionalize({0.5, 1.0, 1.5, 4.0, 1.0, 1.0});
    CHECK(s == ScaledParams{0.5, 1.5, 4.0});
  }
  SUBCASE("general scaling") {
    // b = 1/2, p = 0.5*1*2/2, q = 0.25*1*4/2
    const ScaledParams s = nondimensionalize({1.0, 2.0, 1.0, 1.0, 0.5, 2.0});
    CHECK(s.b == 0.5);
    CHECK(s.p == 0.5);
    CHECK(s.q == 0.5);
  }
  SUBCASE("zero cooperation limit") {
    const ScaledParams s = nondimensionalize({1.0, 1.0, 1.0, 0.0, 1.0, 1.0});
    CHECK(s == ScaledParams{1.0, 1.0, 0.0});
  }
  SUBCASE("p equals R0") {
    const RawParams r{0.7, 3.0, 0.2, 0.9, 0.4, 1.3};
    CHECK(nondimensionalize(r).p == basic_reproduction_number(r));
  }
  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(nondimensionalize({0.0, 1, 1, 1, 1, 1}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, -1, 1, 1, 1, 1}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, 1, 1, 1, 1.5, 1}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, 1, 1, 1, 0.0, 1}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, 1, 1, 1, 1, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, 1, 1, -1.0, 1, 1}), InvalidParameter);
    CHECK_THROWS_AS(nondimensionalize({1, 1, 0.0, 1, 1, 1}), InvalidParameter);
  }
}

TEST_CASE("scaled parameter and state validation") {
  CHECK_NOTHROW(validate(ScaledParams{1.0, 1.0, 0.0}));
  CHECK_THROWS_AS(validate(ScaledParams{0.0, 1.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(ScaledParams{1.0, 0.0, 1.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(ScaledParams{1.0, 1.0, -1e-3}), InvalidParameter);
  CHECK_THROWS_AS(validate(State{-1e-9, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(validate(State{0.0, std::nan("")}), InvalidParameter);
}

TEST_CASE("vector field") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const ScaledParams prm{testing::draw(rng, 0, 5), testing::draw(rng, 0, 3), testing::draw(rng, 0, 10)};
    const Rates r0 = vector_field(prm, {0.0, 0.0});
    const Rates r1 = vector_field(prm, {1.0, 0.0});
    CHECK(r0.du == 0.0);
    CHECK(r0.dv == 0.0);
    CHECK(r1.du == 0.0);
    CHECK(r1.dv == 0.0);
  }
  const Rates r = vector_field({0.5, 1.5, 4.0}, {0.5, 0.125});
  CHECK(r.du == 0.0);
  CHECK(r.dv == 0.0);
}

TEST_CASE("raw vector field matches the scaled one under the scaling map") {
  const RawParams raw{1.3, 2.0, 0.7, 0.4, 0.6, 0.9};
  const ScaledParams s = nondimensionalize(raw);
  const RawState X{0.8, 0.5};
  const RawRates dr = raw_vector_field(raw, X);
  const Rates ds = vector_field(s, to_scaled(raw, X));
  // dU/dT = K D du/dt, dV/dT = C K D dv/dt
  CHECK(dr.dU == Approx(raw.K * raw.D * ds.du).epsilon(1e-14));
  CHECK(dr.dV == Approx(raw.C * raw.K * raw.D * ds.dv).epsilon(1e-14));
}

TEST_CASE("analytic jacobian") {
  const ScaledParams prm{0.8, 1.3, 2.1};
  check_matrix(jacobian(prm, {0, 0}), Matrix2{{{0.8, 0.0}, {0.0, -1.0}}}, 1e-15);
  check_matrix(jacobian(prm, {1, 0}), Matrix2{{{-0.8, -1.3}, {0.0, 0.3}}}, 1e-15);

  const ScaledParams hopf{0.5, 1.5, 4.0};
  const State e{0.5, 0.125};
  const Matrix2 J = jacobian(hopf, e);
  check_matrix(J, Matrix2{{{-0.25, -1.25}, {0.25, 0.25}}}, 1e-15);
  // Reduced form at a positive equilibrium: [[-bu, -1-quv], [b-bu, quv]].
  const double quv = hopf.q * e.u * e.v;
  check_matrix(J, Matrix2{{{-hopf.b * e.u, -1.0 - quv}, {hopf.b - hopf.b * e.u, quv}}}, 1e-15);
}

TEST_CASE("finite-difference jacobian oracle") {
  check_matrix(jacobian_fd_oracle({0.5, 1.5, 4.0}, {0.5, 0.125}, 1e-6),
               Matrix2{{{-0.25, -1.25}, {0.25, 0.25}}}, 1e-6);
  check_matrix(jacobian_fd_oracle({1.0, 0.5, 1.0}, {1.0, 0.0}, 1e-6),
               Matrix2{{{-1.0, -0.5}, {0.0, -0.5}}}, 1e-6);
  CHECK_THROWS_AS(jacobian_fd_oracle({1, 1, 1}, {1, 1}, 0.0), InvalidParameter);

  std::mt19937_64 rng(2024);
  for (int k = 0; k < 500; ++k) {
    const ScaledParams prm{testing::draw(rng, 0, 5), testing::draw(rng, 0, 3), testing::draw(rng, 0, 10)};
    const State s{testing::draw(rng, 0, 2), testing::draw(rng, 0, 2)};
    const Matrix2 a = jacobian(prm, s);
    const Matrix2 n = jacobian_fd_oracle(prm, s, 1e-6);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) REQUIRE(std::abs(a[i][j] - n[i][j]) <= 1e-5);
  }
}
