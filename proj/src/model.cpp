#include "coop/model.hpp"

#include <cmath>
#include <string>

#include "coop/errors.hpp"

namespace coop {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void validate(const RawParams& r) {
  require(finite(r.B) && r.B > 0.0, "B must be finite and > 0");
  require(finite(r.K) && r.K > 0.0, "K must be finite and > 0");
  require(finite(r.P) && r.P > 0.0, "P must be finite and > 0");
  require(finite(r.Q) && r.Q >= 0.0, "Q must be finite and >= 0");
  require(finite(r.C) && r.C > 0.0 && r.C <= 1.0, "C must lie in (0, 1]");
  require(finite(r.D) && r.D > 0.0, "D must be finite and > 0");
}

void validate(const ScaledParams& s) {
  require(finite(s.b) && s.b > 0.0, "b must be finite and > 0");
  require(finite(s.p) && s.p > 0.0, "p must be finite and > 0");
  require(finite(s.q) && s.q >= 0.0, "q must be finite and >= 0");
}

void validate(const State& s) {
  require(finite(s.u) && s.u >= 0.0, "u must be finite and >= 0");
  require(finite(s.v) && s.v >= 0.0, "v must be finite and >= 0");
}

ScaledParams nondimensionalize(const RawParams& r) {
  validate(r);
  return ScaledParams{r.B / r.D, r.C * r.P * r.K / r.D, r.C * r.C * r.Q * r.K * r.K / r.D};
}

double basic_reproduction_number(const RawParams& r) {
  validate(r);
  return r.C * r.P * r.K / r.D;
}

State to_scaled(const RawParams& r, RawState s) { return State{s.U / r.K, s.V / (r.C * r.K)}; }

RawState to_raw(const RawParams& r, State s) { return RawState{r.K * s.u, r.C * r.K * s.v}; }

Rates vector_field(const ScaledParams& prm, State s) {
  const double predation = prm.p * s.u * s.v + prm.q * s.u * s.v * s.v;
  return Rates{prm.b * s.u * (1.0 - s.u) - predation, predation - s.v};
}

RawRates raw_vector_field(const RawParams& r, RawState s) {
  const double predation = r.P * s.U * s.V + r.Q * s.U * s.V * s.V;
  return RawRates{r.B * s.U * (1.0 - s.U / r.K) - predation, r.C * predation - r.D * s.V};
}

Matrix2 jacobian(const ScaledParams& prm, State s) {
  const double u = s.u, v = s.v;
  const double pv_qv2 = prm.p * v + prm.q * v * v;
  const double pu_2quv = prm.p * u + 2.0 * prm.q * u * v;
  return Matrix2{{{prm.b * (1.0 - 2.0 * u) - pv_qv2, -pu_2quv}, {pv_qv2, pu_2quv - 1.0}}};
}

Matrix2 jacobian_fd_oracle(const ScaledParams& prm, State s, double h) {
  if (!(h > 0.0)) throw InvalidParameter("finite-difference step must be > 0");
  const Rates up = vector_field(prm, {s.u + h, s.v});
  const Rates um = vector_field(prm, {s.u - h, s.v});
  const Rates vp = vector_field(prm, {s.u, s.v + h});
  const Rates vm = vector_field(prm, {s.u, s.v - h});
  const double inv = 1.0 / (2.0 * h);
  return Matrix2{{{(up.du - um.du) * inv, (vp.du - vm.du) * inv},
                  {(up.dv - um.dv) * inv, (vp.dv - vm.dv) * inv}}};
}

}  // namespace coop
