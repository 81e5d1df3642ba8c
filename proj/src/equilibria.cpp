#include "coop/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coop/errors.hpp"

namespace coop {

namespace {

double residual_scale(double s) { return std::max(1.0, std::abs(s * s * s)); }

/// Newton steps that are kept only while they reduce |f|.
double polish(const CubicF& f, double s, int steps = 3) {
  double fs = f(s);
  for (int i = 0; i < steps && fs != 0.0; ++i) {
    const double d = f.derivative(s);
    if (d == 0.0) break;
    const double next = s - fs / d;
    const double fn = f(next);
    if (!(std::abs(fn) < std::abs(fs))) break;
    s = next;
    fs = fn;
  }
  return s;
}

/// Safeguarded Newton/bisection on [lo, hi] with f(lo), f(hi) of opposite sign.
double bracket_root(const CubicF& f, double lo, double hi) {
  double flo = f(lo);
  double s = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double fs = f(s);
    if (fs == 0.0) return s;
    if ((fs > 0.0) == (flo > 0.0)) {
      lo = s;
      flo = fs;
    } else {
      hi = s;
    }
    const double d = f.derivative(s);
    double next = d != 0.0 ? s - fs / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 4e-16 * std::max(1.0, std::abs(s)) || hi - lo <= 0.0) return polish(f, next);
    s = next;
  }
  return polish(f, s);
}

/// Two roots in (1, s2) and (s2, inf) when f(1) > 0 > f(s2).
std::vector<double> bracketed_pair(const CubicF& f) {
  const double s2 = f.critical_high();
  double hi = std::max(2.0 * s2, 2.0);
  while (f(hi) <= 0.0) hi *= 2.0;
  return {bracket_root(f, 1.0, s2), bracket_root(f, s2, hi)};
}

}  // namespace

double CubicF::critical_low() const { return (p - std::sqrt(p * p + 3.0 * qb)) / 3.0; }

double CubicF::critical_high() const { return (p + std::sqrt(p * p + 3.0 * qb)) / 3.0; }

std::vector<double> real_roots(const CubicF& f) {
  // Monic s^3 + a s^2 + c1 s + c0 with a = -p, c1 = -qb, c0 = qb.
  const double a = -f.p;
  const double c1 = -f.qb;
  const double c0 = f.qb;
  const double Q = (a * a - 3.0 * c1) / 9.0;
  const double R = (2.0 * a * a * a - 9.0 * a * c1 + 27.0 * c0) / 54.0;
  const double shift = a / 3.0;
  const double Q3 = Q * Q * Q;

  std::vector<double> roots;
  if (R * R < Q3) {
    const double theta = std::acos(std::clamp(R / std::sqrt(Q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(Q);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    roots = {m * std::cos(theta / 3.0) - shift, m * std::cos((theta + two_pi) / 3.0) - shift,
             m * std::cos((theta - two_pi) / 3.0) - shift};
  } else {
    const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q3)), R);
    const double B = A != 0.0 ? Q / A : 0.0;
    roots.push_back(A + B - shift);
    // Real part of the complex pair; a genuine double root when R^2 == Q^3.
    const double candidate = polish(f, -0.5 * (A + B) - shift);
    if (std::abs(f(candidate)) <= 1e-12 * residual_scale(candidate)) {
      roots.push_back(candidate);
      roots.push_back(candidate);
    }
  }
  for (double& s : roots) s = polish(f, s);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double q0_threshold(const ScaledParams& prm) {
  if (!(prm.b > 0.0)) throw InvalidParameter("b must be > 0");
  if (prm.p > 1.0) throw UndefinedThreshold("q0 is only defined for p <= 1");
  const double p = prm.p;
  const double num = (9.0 - p) * std::sqrt((9.0 - p) * (1.0 - p)) + 27.0 - 18.0 * p - p * p;
  return num / (8.0 * prm.b);
}

RootClassification classify_roots(const ScaledParams& prm, const Tolerances& tol) {
  validate(prm);
  const CubicF f = CubicF::from(prm);
  RootClassification out;

  if (prm.p > 1.0) {
    out.cls = ExistenceClass::UniquePositive;
  } else {
    const double q0 = q0_threshold(prm);
    const bool on_threshold = std::abs(prm.q - q0) <= tol.classification * std::max(1.0, q0);
    if (on_threshold)
      out.cls = prm.p < 1.0 ? ExistenceClass::DegenerateDouble : ExistenceClass::NonePositive;
    else if (prm.q < q0)
      out.cls = ExistenceClass::NonePositive;
    else
      // At p = 1, f(s) = (s-1)(s^2-qb): the smaller root sits at s = 1.
      out.cls = prm.p < 1.0 ? ExistenceClass::TwoPositive : ExistenceClass::UniquePositive;
  }

  switch (out.cls) {
    case ExistenceClass::NonePositive:
      break;
    case ExistenceClass::DegenerateDouble:
      out.roots = {f.critical_high()};
      out.multiplicity = 2;
      break;
    case ExistenceClass::UniquePositive: {
      const auto all = real_roots(f);
      double s = all.back();
      if (!(s > 1.0)) {
        double hi = 2.0;
        while (f(hi) <= 0.0) hi *= 2.0;
        s = bracket_root(f, prm.p > 1.0 ? 1.0 : f.critical_high(), hi);
      }
      out.roots = {s};
      break;
    }
    case ExistenceClass::TwoPositive: {
      const auto all = real_roots(f);
      const double s2 = f.critical_high();
      const bool closed_form_ok = all.size() == 3 && all[1] > 1.0 && all[1] < s2 && all[2] > s2;
      out.roots = closed_form_ok ? std::vector<double>{all[1], all[2]} : bracketed_pair(f);
      break;
    }
  }
  return out;
}

EquilibriumReport equilibria_for(const ScaledParams& prm, const Tolerances& tol) {
  const RootClassification rc = classify_roots(prm, tol);
  EquilibriumReport report;
  report.params = prm;
  report.existence = rc.cls;
  report.roots = rc.roots;
  if (prm.p <= 1.0) report.q0 = q0_threshold(prm);

  EquilibriumEntry boundary;
  boundary.kind = EquilibriumKind::Trivial;
  report.equilibria.push_back(boundary);
  boundary.kind = EquilibriumKind::PredatorFree;
  boundary.point = State{1.0, 0.0};
  report.equilibria.push_back(boundary);

  auto positive = [&](EquilibriumKind kind, double s) {
    EquilibriumEntry e;
    e.kind = kind;
    e.s = s;
    e.point = State{1.0 / s, prm.b * (s - 1.0) / (s * s)};
    report.equilibria.push_back(e);
  };
  switch (rc.cls) {
    case ExistenceClass::UniquePositive:
    case ExistenceClass::DegenerateDouble:
      positive(EquilibriumKind::PositivePlus, rc.roots[0]);
      break;
    case ExistenceClass::TwoPositive:
      // s- < s+, so E+ carries the smaller prey level.
      positive(EquilibriumKind::PositivePlus, rc.roots[1]);
      positive(EquilibriumKind::PositiveMinus, rc.roots[0]);
      break;
    case ExistenceClass::NonePositive:
      break;
  }
  return report;
}

}  // namespace coop
