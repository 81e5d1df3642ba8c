#pragma once

#include <vector>

#include "coop/model.hpp"
#include "coop/report.hpp"

namespace coop {

/// Relative tolerance bands used where a closed-form threshold splits the
/// classification. Exact equality is measure-zero in floating point, so a
/// value within `band * max(1, |threshold|)` is treated as on the threshold.
struct Tolerances {
  double classification = 1e-9;  ///< q against q0, b against b_threshold, p = 1 critical q
  double hopf = 1e-9;            ///< q against q_h

  bool operator==(const Tolerances&) const = default;
};

/// The equilibrium cubic f(s) = s^3 - p s^2 - qb (s - 1), whose roots s > 1
/// correspond one-to-one with positive equilibria via u = 1/s.
struct CubicF {
  double p = 0.0;
  double qb = 0.0;

  static CubicF from(const ScaledParams& params) { return CubicF{params.p, params.q * params.b}; }

  double operator()(double s) const { return ((s - p) * s - qb) * s + qb; }
  double derivative(double s) const { return (3.0 * s - 2.0 * p) * s - qb; }

  /// Critical points s1 <= 0 <= s2 of f.
  double critical_low() const;
  double critical_high() const;
};

/// Every real root of f from the closed-form (Cardano / trigonometric)
/// solution, Newton-polished, ascending. Includes roots <= 1.
std::vector<double> real_roots(const CubicF& f);

struct RootClassification {
  ExistenceClass cls = ExistenceClass::NonePositive;
  /// Roots of f in (1, inf), ascending; a double root is listed once.
  std::vector<double> roots;
  /// 2 for the DegenerateDouble root, 1 otherwise.
  int multiplicity = 1;
};

/// q0 = [(9-p) sqrt((9-p)(1-p)) + 27 - 18p - p^2] / (8b); equals 1/b at
/// p = 1. Throws UndefinedThreshold for p > 1.
double q0_threshold(const ScaledParams& params);

/// Existence class with the roots of f above 1. The case split at p = 1 uses
/// exact comparison; callers should not pass p within rounding of 1 by
/// accident.
RootClassification classify_roots(const ScaledParams& params, const Tolerances& tol = {});

/// E0, E1 and the positive equilibria (u = 1/s, v = b(s-1)/s^2). Only
/// coordinates, roots and q0 are filled; stability is left for analyze().
EquilibriumReport equilibria_for(const ScaledParams& params, const Tolerances& tol = {});

}  // namespace coop
