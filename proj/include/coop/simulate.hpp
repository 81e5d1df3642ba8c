#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coop/model.hpp"
#include "coop/report.hpp"

namespace coop {

/// Stop when the orbit sits on an equilibrium: distance at most `radius`
/// and max-norm of the vector field at most `residual`.
struct ConvergenceEvent {
  bool enabled = true;
  double radius = 1e-6;
  double residual = 1e-8;
};

/// Limit-cycle detection on the section u = u+ crossed with du/dt < 0.
struct CycleEvent {
  bool enabled = false;
  /// Returns before burn_in_fraction * t_max are discarded.
  double burn_in_fraction = 0.5;
  /// Number of successive return-time differences that must agree.
  int differences = 3;
  double period_rtol = 1e-4;
  double state_tol = 1e-6;
};

/// Stop when the orbit enters the ball of radius `inner` around `center`.
/// Leaving the ball of radius `outer` stops the run too, unless
/// `stop_on_exit` is off, in which case it is only recorded.
struct BallEvent {
  State center;
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();
  bool stop_on_exit = true;
};

struct SimConfig {
  State initial;
  double t_max = 5000.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  /// 0 picks the first step automatically.
  double initial_step = 0.0;
  std::int64_t max_steps = 100'000'000;
  /// Keep every accepted step in the trajectory; otherwise only the endpoints.
  bool record = true;
  ConvergenceEvent convergence;
  CycleEvent cycle;
  std::optional<BallEvent> ball;
};

/// Throws InvalidParameter.
void validate(const SimConfig& cfg);

enum class Termination { Horizon, ConvergedToEquilibrium, CycleDetected, StepFailure, LeftBall };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view name);

struct CycleSummary {
  double period = 0.0;
  double u_min = 0.0, u_max = 0.0;
  double v_min = 0.0, v_max = 0.0;
  /// Time average over the last period.
  State mean;
  /// Section returns recorded after the burn-in.
  int returns = 0;
  /// Successive periods and return states agreed within the configured tolerances.
  bool converged = false;

  double amplitude_u() const { return u_max - u_min; }
  double amplitude_v() const { return v_max - v_min; }

  bool operator==(const CycleSummary&) const = default;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  /// Events were located on the continuous extension of each step.
  bool dense_output = true;
  Termination termination = Termination::Horizon;
  /// Set for ConvergedToEquilibrium: which equilibrium was reached.
  std::optional<EquilibriumKind> converged_to;
  /// Set when cycle detection ran and recorded at least two returns.
  std::optional<CycleSummary> cycle;
  /// The orbit left the outer ball of a BallEvent at some point.
  bool left_ball = false;
  /// Reason for a StepFailure.
  std::string failure;
  std::int64_t accepted_steps = 0;
  std::int64_t rejected_steps = 0;
  /// Largest negative undershoot that was clamped to 0 (always < atol).
  double max_clamp = 0.0;

  State final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

/// Dormand-Prince 5(4) integration of the scaled system with PI step control
/// and dense output. Trial states with a component in (-atol, 0) are clamped to
/// 0; a larger undershoot rejects the step. Orbits starting on an axis stay on
/// it exactly. Stops at the first event, at t_max, or with StepFailure when the
/// step falls below 1e-14 or max_steps is exhausted.
Trajectory integrate(const ScaledParams& params, const SimConfig& cfg);

/// Runs integrate() with cycle detection. Returns nothing when E+ is absent
/// or not Unstable. Throws NumericalFailure if no cycle is confirmed by t_max.
std::optional<CycleSummary> detect_cycle(const ScaledParams& params, SimConfig cfg);

enum class ProbeOutcome { Converges, Escapes, Inconclusive };

std::string_view to_string(ProbeOutcome outcome);

struct ProbeOrbit {
  State start;
  Termination termination = Termination::Horizon;
  /// Entered the radius/10 ball.
  bool converged = false;
  /// Left the 10*radius ball at some point.
  bool escaped = false;
  double t_end = 0.0;
  /// Distance from the equilibrium at t_end.
  double distance = 0.0;
};

struct ProbeResult {
  ProbeOutcome outcome = ProbeOutcome::Inconclusive;
  /// True iff every orbit entered the radius/10 ball.
  bool converges = false;
  double t_max = 0.0;
  std::vector<ProbeOrbit> orbits;
};

struct ProbeOptions {
  double radius = 1e-3;
  /// Default: from the eigenvalues at the equilibrium, 1e6 if non-hyperbolic.
  std::optional<double> t_max;
  /// Rotates the starting angles; none uses the unrotated grid.
  std::optional<std::uint64_t> seed;
  double rtol = 1e-10;
  double atol = 1e-13;
};

/// Horizon used by stability_probe when none is given.
double probe_horizon(const ScaledParams& params, State equilibrium);

/// Starts 8 orbits on the circle of the given radius around `equilibrium`
/// (restricted to the open first quadrant). Converges if every orbit enters
/// the radius/10 ball within t_max, even after an excursion. Otherwise escapes
/// if some non-converging orbit left the 10*radius ball, else inconclusive.
/// An orbit that settles on a different equilibrium is stopped early.
ProbeResult stability_probe(const ScaledParams& params, State equilibrium, const ProbeOptions& opt = {});

}  // namespace coop
