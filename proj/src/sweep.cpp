#include "coop/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "coop/errors.hpp"
#include "coop/stability.hpp"

namespace coop {

namespace {

void check_block(const ParameterBlock& fixed, SweepParameter parameter) {
  const bool scaled = std::holds_alternative<ScaledParams>(fixed);
  if (parameter == SweepParameter::Q && !scaled) throw InvalidParameter("a q sweep needs scaled parameters");
  if (parameter == SweepParameter::B && scaled) throw InvalidParameter("a B sweep needs raw parameters");
}

/// Scaled parameters at grid value x; B sweeps go through nondimensionalize.
ScaledParams scaled_at(const ParameterBlock& fixed, SweepParameter parameter, double x) {
  if (parameter == SweepParameter::Q) {
    ScaledParams s = std::get<ScaledParams>(fixed);
    s.q = x;
    validate(s);
    return s;
  }
  RawParams r = std::get<RawParams>(fixed);
  r.B = x;
  return nondimensionalize(r);
}

EquilibriumReport report_at(const SweepSpec& spec, double x) {
  if (spec.parameter == SweepParameter::B) {
    RawParams r = std::get<RawParams>(spec.fixed);
    r.B = x;
    return classify_nonscaled(r, spec.tol).scaled_report;
  }
  return analyze(scaled_at(spec.fixed, spec.parameter, x), spec.tol);
}

AttractorSummary find_attractor(const ScaledParams& prm, const AttractorProbe& probe, std::optional<double> tr_plus) {
  SimConfig cfg;
  cfg.initial = probe.initial;
  cfg.t_max = probe.t_max;
  if (probe.auto_horizon && tr_plus) {
    const double stretch = *tr_plus != 0.0 ? 60.0 / std::abs(*tr_plus) : probe.horizon_cap;
    cfg.t_max = std::max(probe.t_max, std::min(probe.horizon_cap, stretch));
  }
  cfg.rtol = probe.rtol;
  cfg.atol = probe.atol;
  cfg.max_steps = probe.max_steps;
  cfg.record = false;
  cfg.cycle.enabled = true;
  const Trajectory tr = integrate(prm, cfg);
  AttractorSummary a;
  a.termination = tr.termination;
  a.equilibrium = tr.converged_to;
  a.final_state = tr.final_state();
  a.final_time = tr.final_time();
  if (tr.termination == Termination::CycleDetected) a.cycle = tr.cycle;
  if (tr.termination == Termination::StepFailure) throw NumericalFailure("step-failure: " + tr.failure);
  return a;
}

void flag_brackets(std::vector<SweepRow>& rows, const Tolerances& tol) {
  auto gap_q0 = [](const SweepRow& r) -> std::optional<double> {
    if (!r.q0 || !r.error.empty()) return std::nullopt;
    return r.scaled.q - *r.q0;
  };
  auto gap_qh = [](const SweepRow& r) -> std::optional<double> {
    if (!r.qh || !r.error.empty()) return std::nullopt;
    return r.scaled.q - *r.qh;
  };
  if (rows.size() == 1) {
    SweepRow& r = rows.front();
    if (auto g = gap_q0(r)) r.brackets_q0 = std::abs(*g) <= tol.classification * std::max(1.0, *r.q0);
    if (auto g = gap_qh(r)) r.brackets_qh = std::abs(*g) <= tol.hopf * std::max(1.0, *r.qh);
    return;
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const auto a0 = gap_q0(rows[i]), b0 = gap_q0(rows[i + 1]);
    if (a0 && b0 && *a0 * *b0 <= 0.0) rows[i].brackets_q0 = rows[i + 1].brackets_q0 = true;
    const auto ah = gap_qh(rows[i]), bh = gap_qh(rows[i + 1]);
    if (ah && bh && *ah * *bh <= 0.0) rows[i].brackets_qh = rows[i + 1].brackets_qh = true;
  }
}

int label(const ThresholdQuery& q, double x) {
  const ScaledParams prm = scaled_at(q.fixed, q.parameter, x);
  switch (q.kind) {
    case ThresholdKind::Existence: {
      const auto roots = real_roots(CubicF::from(prm));
      return std::any_of(roots.begin(), roots.end(), [](double s) { return s > 1.0; }) ? 1 : 0;
    }
    case ThresholdKind::StabilityPlus: {
      const EquilibriumReport rep = analyze(prm, q.tol);
      const auto* plus = rep.find(EquilibriumKind::PositivePlus);
      return plus ? static_cast<int>(plus->verdict->tag) : -1;
    }
    case ThresholdKind::TracePlus: {
      const auto roots = real_roots(CubicF::from(prm));
      if (roots.empty() || !(roots.back() > 1.0)) return -1;
      const double s = roots.back(), u = 1.0 / s, v = prm.b * (s - 1.0) / (s * s);
      return u * (prm.q * v - prm.b) > 0.0 ? 1 : 0;
    }
  }
  return -2;
}

}  // namespace

std::string_view to_string(SweepParameter p) { return p == SweepParameter::Q ? "q" : "B"; }

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "q") return SweepParameter::Q;
  if (name == "B") return SweepParameter::B;
  throw InvalidParameter("swept parameter must be q or B, got " + std::string(name));
}

std::string_view to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::Existence: return "existence";
    case ThresholdKind::StabilityPlus: return "stability";
    case ThresholdKind::TracePlus: return "trace";
  }
  return "?";
}

ThresholdKind parse_threshold_kind(std::string_view name) {
  for (ThresholdKind k : {ThresholdKind::Existence, ThresholdKind::StabilityPlus, ThresholdKind::TracePlus})
    if (to_string(k) == name) return k;
  throw InvalidParameter("unknown threshold kind: " + std::string(name));
}

std::string AttractorSummary::label() const {
  if (termination == Termination::ConvergedToEquilibrium && equilibrium) return std::string(to_string(*equilibrium));
  if (termination == Termination::CycleDetected) return "cycle";
  return std::string(to_string(termination));
}

void validate(const SweepSpec& s) {
  check_block(s.fixed, s.parameter);
  if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || s.lo > s.hi) throw InvalidParameter("sweep range needs lo <= hi");
  if (s.lo < s.hi && s.points < 2) throw InvalidParameter("sweep needs at least 2 grid points");
  if (s.points < 1) throw InvalidParameter("sweep needs at least 1 grid point");
  if (s.probe) {
    SimConfig c;
    c.initial = s.probe->initial;
    c.t_max = s.probe->t_max;
    c.rtol = s.probe->rtol;
    c.atol = s.probe->atol;
    c.max_steps = s.probe->max_steps;
    validate(c);
    if (!(s.probe->horizon_cap >= s.probe->t_max)) throw InvalidParameter("horizon cap must be >= t_max");
  }
  // Fixed parameters other than the swept one are checked at both ends.
  scaled_at(s.fixed, s.parameter, s.lo);
  scaled_at(s.fixed, s.parameter, s.hi);
}

int row_count(const SweepSpec& spec) { return spec.lo == spec.hi ? 1 : spec.points; }

double grid_value(const SweepSpec& spec, int i) {
  const int n = row_count(spec);
  if (i < 0 || i >= n) throw InvalidParameter("grid index out of range");
  if (i == n - 1) return spec.hi;
  return spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

SweepRow sweep_row(const SweepSpec& spec, int index) {
  SweepRow row;
  row.param = grid_value(spec, index);
  try {
    const EquilibriumReport rep = report_at(spec, row.param);
    row.scaled = rep.params;
    row.existence = rep.existence;
    row.q0 = rep.q0;
    row.qh = rep.qh;
    if (rep.roots.size() == 2) {
      row.s_minus = rep.roots[0];
      row.s_plus = rep.roots[1];
    } else if (rep.roots.size() == 1) {
      row.s_plus = rep.roots[0];
    }
    if (const auto* e = rep.find(EquilibriumKind::PositivePlus)) {
      row.plus = e->point;
      row.tr_plus = e->trace;
      row.det_plus = e->determinant;
      row.verdict_plus = e->verdict->tag;
    }
    if (const auto* e = rep.find(EquilibriumKind::PositiveMinus)) row.verdict_minus = e->verdict->tag;
    if (spec.probe) row.attractor = find_attractor(row.scaled, *spec.probe, row.tr_plus);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const int n = row_count(spec);
  std::vector<SweepRow> rows(static_cast<std::size_t>(n));
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));

  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) rows[static_cast<std::size_t>(i)] = sweep_row(spec, i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  flag_brackets(rows, spec.tol);
  return rows;
}

double locate_threshold(const ThresholdQuery& q) {
  check_block(q.fixed, q.parameter);
  if (!(q.lo < q.hi) || !std::isfinite(q.lo) || !std::isfinite(q.hi)) throw InvalidParameter("bracket needs lo < hi");
  if (!(q.width > 0.0)) throw InvalidParameter("bisection width must be > 0");
  double lo = q.lo, hi = q.hi;
  const int at_lo = label(q, lo), at_hi = label(q, hi);
  if (at_lo == at_hi) throw NoBracket("both ends of the bracket classify the same way");
  while (hi - lo > q.width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (label(q, mid) == at_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace coop
