#pragma once

#include <array>

namespace coop {

/// Biological (non-scaled) parameters of the cooperative predation model
///
///   U' = B U (1 - U/K) - P U V - Q U V^2
///   V' = C (P U V + Q U V^2) - D V
///
/// B, K, P, D must be strictly positive, Q >= 0 and 0 < C <= 1.
struct RawParams {
  double B = 0.0;  ///< prey per-capita birth rate
  double K = 0.0;  ///< carrying capacity
  double P = 0.0;  ///< mass-action predation rate
  double Q = 0.0;  ///< cooperative predation rate
  double C = 0.0;  ///< conversion efficiency
  double D = 0.0;  ///< predator per-capita death rate

  bool operator==(const RawParams&) const = default;
};

/// Dimensionless parameters of the scaled system
///
///   u' = b u (1 - u) - p u v - q u v^2
///   v' = p u v + q u v^2 - v
///
/// b > 0, p > 0, q >= 0. p is the predator basic reproduction number.
struct ScaledParams {
  double b = 0.0;
  double p = 0.0;
  double q = 0.0;

  bool operator==(const ScaledParams&) const = default;
};

/// Point (u, v) of the scaled phase plane.
struct State {
  double u = 0.0;
  double v = 0.0;

  bool operator==(const State&) const = default;
};

/// Point (U, V) of the non-scaled phase plane.
struct RawState {
  double U = 0.0;
  double V = 0.0;

  bool operator==(const RawState&) const = default;
};

/// Time derivative of a state.
struct Rates {
  double du = 0.0;
  double dv = 0.0;
};

/// Row-major 2x2 matrix, m[row][col].
using Matrix2 = std::array<std::array<double, 2>, 2>;

void validate(const RawParams& raw);
void validate(const ScaledParams& params);
/// Rejects states with a negative or non-finite coordinate.
void validate(const State& state);

/// b = B/D, p = CPK/D, q = C^2 Q K^2 / D. Throws InvalidParameter.
ScaledParams nondimensionalize(const RawParams& raw);

/// Predator basic reproduction number R0 = CPK/D (equal to the scaled p).
double basic_reproduction_number(const RawParams& raw);

/// (U, V) -> (U/K, V/(CK)).
State to_scaled(const RawParams& raw, RawState s);
/// (u, v) -> (K u, C K v).
RawState to_raw(const RawParams& raw, State s);

/// Right-hand side of the scaled system. Total on finite input; callers
/// keep the state in the closed first quadrant.
Rates vector_field(const ScaledParams& params, State s);

/// Right-hand side of the non-scaled system in original units.
struct RawRates {
  double dU = 0.0;
  double dV = 0.0;
};
RawRates raw_vector_field(const RawParams& raw, RawState s);

/// Analytic Jacobian of vector_field.
Matrix2 jacobian(const ScaledParams& params, State s);

/// Central-difference Jacobian of vector_field with step h > 0. Validation
/// oracle for jacobian(); never used on a production code path.
Matrix2 jacobian_fd_oracle(const ScaledParams& params, State s, double h);

inline double trace(const Matrix2& m) { return m[0][0] + m[1][1]; }
inline double determinant(const Matrix2& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

}  // namespace coop
