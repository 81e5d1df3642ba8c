#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "coop/equilibria.hpp"
#include "coop/model.hpp"
#include "coop/report.hpp"

namespace coop {

/// q_h = (p+b)^2 / (p+b-1). Throws UndefinedThreshold unless p + b > 1.
double qh_threshold(const ScaledParams& params);

/// b* = [3(1-p) + sqrt((1-p)(9-p))] / 4. Below b*, tr(J+) > 0 for every
/// q > q0; above it E+ switches stability at q_h. The curves q_h and q0 touch
/// at b = b* (q_h >= q0 on both sides). Throws UndefinedThreshold for p > 1.
double b_threshold(double p);

/// Roots of lambda^2 - tr lambda + det, computed in closed form.
std::array<std::complex<double>, 2> eigenvalues_from(double trace, double determinant);

struct BoundaryVerdicts {
  StabilityVerdict e0;
  StabilityVerdict e1;
};

/// Local stability of E0 and E1, including the non-hyperbolic p = 1 cases.
BoundaryVerdicts classify_boundary(const ScaledParams& params, const Tolerances& tol = {});

/// Fills trace, determinant, eigenvalues and verdicts of E+ / E- in `report`
/// (typically produced by equilibria_for). Entries of other kinds are left
/// untouched.
void classify_positive(const ScaledParams& params, EquilibriumReport& report,
                       const Tolerances& tol = {});

/// Full scaled analysis: equilibria, Jacobian data and verdicts for every
/// equilibrium, plus the q0 / q_h / b* markers.
EquilibriumReport analyze(const ScaledParams& params, const Tolerances& tol = {});

/// An equilibrium expressed in the original units.
struct RawEquilibrium {
  EquilibriumKind kind = EquilibriumKind::Trivial;
  RawState point;
  /// Eigenvalues of the non-scaled Jacobian (scaled eigenvalues times D).
  std::array<std::complex<double>, 2> eigenvalues{};
  std::optional<StabilityVerdict> verdict;

  bool operator==(const RawEquilibrium&) const = default;
};

/// The thresholds of the analysis rewritten in non-scaled quantities. Each
/// pair compares a left-hand side against its bound.
struct NonScaledThresholds {
  double r0 = 0.0;                          ///< CPK / D
  double cooperation = 0.0;                 ///< C^2 Q K^2
  std::optional<double> hopf_bound;         ///< (CPK+B)^2 / (CPK+B-D), when CPK + B > D
  double existence_lhs = 0.0;               ///< 8 B C^2 Q K^2
  std::optional<double> existence_bound;    ///< (9D-CPK) sqrt((D-CPK)(9D-CPK)) + 27D^2 - 18DCPK - (CPK)^2, R0 <= 1
  double birth_lhs = 0.0;                   ///< 4B
  std::optional<double> birth_bound;        ///< 3(D-CPK) + sqrt((D-CPK)(9D-CPK)), R0 <= 1
  double critical_lhs = 0.0;                ///< B C^2 Q K^2
  double critical_bound = 0.0;              ///< D^2

  bool operator==(const NonScaledThresholds&) const = default;
};

struct NonScaledReport {
  RawParams raw;
  ScaledParams scaled;
  EquilibriumReport scaled_report;
  std::vector<RawEquilibrium> equilibria;
  NonScaledThresholds thresholds;

  bool operator==(const NonScaledReport&) const = default;
};

/// Nondimensionalizes, runs analyze() and maps the result back to (U, V).
NonScaledReport classify_nonscaled(const RawParams& raw, const Tolerances& tol = {});

}  // namespace coop
