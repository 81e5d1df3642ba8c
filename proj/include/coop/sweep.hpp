#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coop/equilibria.hpp"
#include "coop/model.hpp"
#include "coop/report.hpp"
#include "coop/simulate.hpp"

namespace coop {

/// q sweeps the scaled system; B sweeps the prey birth rate of a non-scaled
/// parameter set.
enum class SweepParameter { Q, B };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

using ParameterBlock = std::variant<ScaledParams, RawParams>;

/// Per-row simulation used to find the attractor reached from `initial`.
struct AttractorProbe {
  State initial{0.4, 0.1};
  double t_max = 5000.0;
  /// Stretch the horizon to 60 / |tr(J+)| (capped) so slow transients near
  /// q_h can settle.
  bool auto_horizon = true;
  double horizon_cap = 2e5;
  double rtol = 1e-10;
  double atol = 1e-13;
  std::int64_t max_steps = 100'000'000;

  bool operator==(const AttractorProbe&) const = default;
};

struct SweepSpec {
  /// ScaledParams for a q sweep, RawParams for a B sweep. The swept field is
  /// overwritten at every grid point.
  ParameterBlock fixed = ScaledParams{};
  SweepParameter parameter = SweepParameter::Q;
  double lo = 0.0;
  double hi = 0.0;
  /// Grid points, >= 2; lo == hi gives a single row whatever this is.
  int points = 2;
  std::optional<AttractorProbe> probe;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
  Tolerances tol;

  bool operator==(const SweepSpec&) const = default;
};

/// Throws InvalidParameter.
void validate(const SweepSpec& spec);

struct AttractorSummary {
  Termination termination = Termination::Horizon;
  std::optional<EquilibriumKind> equilibrium;
  State final_state;
  double final_time = 0.0;
  std::optional<CycleSummary> cycle;

  /// "E+", "cycle", "horizon", ... as written to the sweep CSV.
  std::string label() const;

  bool operator==(const AttractorSummary&) const = default;
};

struct SweepRow {
  double param = 0.0;
  ScaledParams scaled;
  ExistenceClass existence = ExistenceClass::NonePositive;
  std::optional<double> s_minus, s_plus;
  std::optional<State> plus;
  std::optional<double> tr_plus, det_plus;
  std::optional<Verdict> verdict_plus, verdict_minus;
  std::optional<double> q0, qh;
  /// This row is an endpoint of a grid cell containing the threshold.
  bool brackets_q0 = false;
  bool brackets_qh = false;
  std::optional<AttractorSummary> attractor;
  /// Non-empty when the row failed; the other fields may be partial.
  std::string error;

  bool operator==(const SweepRow&) const = default;
};

/// Grid value of row `index`.
double grid_value(const SweepSpec& spec, int index);
int row_count(const SweepSpec& spec);

/// One row in isolation; bracket flags are left false (they need neighbours).
SweepRow sweep_row(const SweepSpec& spec, int index);

/// Every row, computed concurrently and assembled by grid index, with the q0 /
/// q_h bracket flags set. Per-row failures are recorded in SweepRow::error.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

enum class ThresholdKind {
  /// Whether f has a root above 1, from the closed-form root count.
  Existence,
  /// The stability verdict of E+.
  StabilityPlus,
  /// The sign of tr(J+) evaluated from the largest root of f.
  TracePlus,
};

std::string_view to_string(ThresholdKind k);
ThresholdKind parse_threshold_kind(std::string_view name);

struct ThresholdQuery {
  ParameterBlock fixed = ScaledParams{};
  SweepParameter parameter = SweepParameter::Q;
  double lo = 0.0;
  double hi = 0.0;
  ThresholdKind kind = ThresholdKind::StabilityPlus;
  double width = 1e-10;
  Tolerances tol;
};

/// Bisects the predicate between lo and hi down to `width` and returns the
/// midpoint of the final bracket. Throws NoBracket when both endpoints
/// classify the same way.
double locate_threshold(const ThresholdQuery& query);

}  // namespace coop
