#include "coop/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "coop/equilibria.hpp"
#include "coop/errors.hpp"
#include "coop/stability.hpp"

namespace coop {

namespace {

constexpr double kMinStep = 1e-14;
constexpr double kEventTimeTol = 1e-12;
constexpr int kDenseSamples = 16;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// PI controller.
constexpr double kBeta = 0.04, kSafe = 0.9, kFacMin = 0.2, kFacMax = 10.0;

struct Vec {
  double u = 0.0, v = 0.0;
};

Vec operator+(Vec a, Vec b) { return {a.u + b.u, a.v + b.v}; }
Vec operator-(Vec a, Vec b) { return {a.u - b.u, a.v - b.v}; }
Vec operator*(double s, Vec a) { return {s * a.u, s * a.v}; }

Vec field(const ScaledParams& prm, Vec y) {
  const Rates r = vector_field(prm, State{y.u, y.v});
  return {r.du, r.dv};
}

State as_state(Vec y) { return {y.u, y.v}; }
Vec as_vec(State s) { return {s.u, s.v}; }

double distance(State a, State b) { return std::hypot(a.u - b.u, a.v - b.v); }

double linf(Rates r) { return std::max(std::abs(r.du), std::abs(r.dv)); }

bool finite(Vec y) { return std::isfinite(y.u) && std::isfinite(y.v); }

/// Continuous extension of one accepted step.
struct Dense {
  double t0 = 0.0, h = 0.0;
  Vec r1, r2, r3, r4, r5;

  Vec at_theta(double th) const {
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
  }
};

double initial_step(const ScaledParams& prm, Vec y0, Vec f0, const SimConfig& cfg, double hmax) {
  const double sku = cfg.atol + cfg.rtol * std::abs(y0.u), skv = cfg.atol + cfg.rtol * std::abs(y0.v);
  const double dnf = std::pow(f0.u / sku, 2) + std::pow(f0.v / skv, 2);
  const double dny = std::pow(y0.u / sku, 2) + std::pow(y0.v / skv, 2);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, hmax);
  const Vec f1 = field(prm, y0 + h * f0);
  const double der2 = std::sqrt(std::pow((f1.u - f0.u) / sku, 2) + std::pow((f1.v - f0.v) / skv, 2)) / h;
  const double der12 = std::max(der2, std::sqrt(dnf));
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, hmax});
}

/// Statistics of the orbit between two section returns.
struct PeriodStats {
  double u_min = INFINITY, u_max = -INFINITY, v_min = INFINITY, v_max = -INFINITY;
  double t_start = 0.0, t_last = 0.0;
  Vec last;
  Vec integral;
  bool open = false;

  void start(double t, Vec y) {
    *this = PeriodStats{};
    open = true;
    t_start = t_last = t;
    last = y;
    extend(y);
  }
  void extend(Vec y) {
    u_min = std::min(u_min, y.u);
    u_max = std::max(u_max, y.u);
    v_min = std::min(v_min, y.v);
    v_max = std::max(v_max, y.v);
  }
  void add(double t, Vec y) {
    if (!open) return;
    const double dt = t - t_last;
    integral = integral + (0.5 * dt) * (last + y);
    t_last = t;
    last = y;
    extend(y);
  }
};

struct Return {
  double t = 0.0;
  double v = 0.0;
};

class Integrator {
 public:
  Integrator(const ScaledParams& prm, const SimConfig& cfg) : prm_(prm), cfg_(cfg) {
    const EquilibriumReport rep = equilibria_for(prm);
    for (const auto& e : rep.equilibria) targets_.push_back({e.kind, e.point});
    if (const auto* plus = rep.find(EquilibriumKind::PositivePlus)) section_u_ = plus->point.u;
    burn_in_ = cfg.cycle.burn_in_fraction * cfg.t_max;
    on_u_axis_ = cfg.initial.u == 0.0;
    on_v_axis_ = cfg.initial.v == 0.0;
  }

  Trajectory run() {
    double t = 0.0;
    Vec y = as_vec(cfg_.initial);
    record(t, y);
    Vec k1 = field(prm_, y);
    const double hmax = std::min(cfg_.max_step, cfg_.t_max);
    double h = cfg_.initial_step > 0.0 ? std::min(cfg_.initial_step, hmax) : initial_step(prm_, y, k1, cfg_, hmax);
    double facold = 1e-4;
    bool last_rejected = false;
    std::int64_t steps = 0;

    while (t < cfg_.t_max) {
      if (h < kMinStep) return fail(t, y, "step size underflow");
      if (++steps > cfg_.max_steps) return fail(t, y, "step limit exhausted");

      bool last = false;
      double hs = std::min(h, hmax);
      if (t + hs >= cfg_.t_max) {
        hs = cfg_.t_max - t;
        last = true;
      }

      const Vec k2 = field(prm_, y + hs * (a21 * k1));
      const Vec k3 = field(prm_, y + hs * (a31 * k1 + a32 * k2));
      const Vec k4 = field(prm_, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      const Vec k5 = field(prm_, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Vec k6 = field(prm_, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Vec y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      Vec k7 = field(prm_, y1);
      const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const double sku = cfg_.atol + cfg_.rtol * std::max(std::abs(y.u), std::abs(y1.u));
      const double skv = cfg_.atol + cfg_.rtol * std::max(std::abs(y.v), std::abs(y1.v));
      const double en = std::sqrt(0.5 * (std::pow(err.u / sku, 2) + std::pow(err.v / skv, 2)));

      if (!std::isfinite(en) || !finite(y1) || !finite(k7) || y1.u < -cfg_.atol || y1.v < -cfg_.atol) {
        ++rejected_;
        h = 0.5 * hs;
        last_rejected = true;
        continue;
      }

      const double fac11 = std::pow(en, 0.2 - kBeta * 0.75);
      if (en > 1.0) {
        ++rejected_;
        h = hs / std::min(1.0 / kFacMin, fac11 / kSafe);
        last_rejected = true;
        continue;
      }

      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
      double hnew = hs / fac;
      if (last_rejected) hnew = std::min(hnew, hs);
      facold = std::max(en, 1e-4);
      last_rejected = false;

      // Clamp sub-tolerance undershoot and pin invariant axes.
      bool changed = clamp(y1.u) | clamp(y1.v);
      if (on_u_axis_ && y1.u != 0.0) y1.u = 0.0, changed = true;
      if (on_v_axis_ && y1.v != 0.0) y1.v = 0.0, changed = true;
      if (changed) k7 = field(prm_, y1);

      Dense dense;
      dense.t0 = t;
      dense.h = hs;
      dense.r1 = y;
      dense.r2 = y1 - y;
      const Vec bspl = hs * k1 - dense.r2;
      dense.r3 = bspl;
      dense.r4 = dense.r2 - hs * k7 - bspl;
      dense.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      const double t1 = last ? cfg_.t_max : t + hs;
      ++accepted_;
      const bool stop = events(dense, t, y, t1, y1);
      t = t1;
      y = y1;
      k1 = k7;
      record(t, y);
      if (stop) return finish(t, y);
      h = hnew;
    }
    out_.termination = Termination::Horizon;
    return finish(t, y);
  }

 private:
  bool clamp(double& x) {
    if (x < 0.0) {
      max_clamp_ = std::max(max_clamp_, -x);
      x = 0.0;
      return true;
    }
    return false;
  }

  void record(double t, Vec y) {
    if (!cfg_.record && !out_.times.empty()) return;
    out_.times.push_back(t);
    out_.states.push_back(as_state(y));
  }

  Trajectory fail(double t, Vec y, const std::string& why) {
    std::ostringstream msg;
    msg << why << " at t=" << t;
    out_.termination = Termination::StepFailure;
    out_.failure = msg.str();
    return finish(t, y);
  }

  Trajectory finish(double t, Vec y) {
    if (!cfg_.record && out_.times.back() != t) {
      out_.times.push_back(t);
      out_.states.push_back(as_state(y));
    }
    if (cfg_.cycle.enabled && !out_.cycle && returns_.size() >= 2 && have_period_) out_.cycle = summary(false);
    out_.accepted_steps = accepted_;
    out_.rejected_steps = rejected_;
    out_.max_clamp = max_clamp_;
    return std::move(out_);
  }

  /// Returns true when an event terminates the run at the end of this step.
  bool events(const Dense& d, double t0, Vec y0, double t1, Vec y1) {
    if (cfg_.cycle.enabled && section_u_ && t1 >= burn_in_ && cycle_step(d, t0, y0, t1, y1)) {
      out_.termination = Termination::CycleDetected;
      return true;
    }
    const State s1 = as_state(y1);
    if (cfg_.ball) {
      const double r = distance(s1, cfg_.ball->center);
      if (r <= cfg_.ball->inner) {
        out_.termination = Termination::ConvergedToEquilibrium;
        return true;
      }
      if (r >= cfg_.ball->outer) {
        out_.left_ball = true;
        if (cfg_.ball->stop_on_exit) {
          out_.termination = Termination::LeftBall;
          return true;
        }
      }
    }
    if (cfg_.convergence.enabled && linf(vector_field(prm_, s1)) <= cfg_.convergence.residual) {
      for (const auto& [kind, point] : targets_) {
        if (distance(s1, point) <= cfg_.convergence.radius) {
          out_.termination = Termination::ConvergedToEquilibrium;
          out_.converged_to = kind;
          return true;
        }
      }
    }
    return false;
  }

  double locate_section(const Dense& d) const {
    double lo = 0.0, hi = 1.0;
    const double su = *section_u_;
    while ((hi - lo) * d.h > kEventTimeTol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (d.at_theta(mid).u - su > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  bool cycle_step(const Dense& d, double t0, Vec y0, double t1, Vec y1) {
    const double su = *section_u_;
    const bool crossed = y0.u - su > 0.0 && y1.u - su <= 0.0;
    const double th_c = crossed ? locate_section(d) : 2.0;
    const double t_c = d.t0 + th_c * d.h;
    const bool counted = crossed && t_c >= burn_in_;

    // Dense samples of this step, split at the crossing.
    bool closed = false;
    for (int j = 0; j <= kDenseSamples; ++j) {
      const double th = static_cast<double>(j) / kDenseSamples;
      if (counted && !closed && th >= th_c) {
        close_period(t_c, d.at_theta(th_c));
        closed = true;
      }
      const Vec y = j == 0 ? y0 : j == kDenseSamples ? y1 : d.at_theta(th);
      stats_.add(d.t0 + th * d.h, y);
    }
    if (counted && !closed) close_period(t_c, d.at_theta(th_c));
    if (!counted) return false;

    const Vec yc = d.at_theta(th_c);
    if (cfg_.record && t_c > t0 && t_c < t1) {
      out_.times.push_back(t_c);
      out_.states.push_back(State{yc.u, std::max(yc.v, 0.0)});
    }
    returns_.push_back({t_c, yc.v});
    return cycle_confirmed();
  }

  void close_period(double t, Vec y) {
    if (stats_.open) {
      stats_.add(t, y);
      period_ = stats_;
      have_period_ = true;
    }
    stats_.start(t, y);
  }

  bool cycle_confirmed() {
    const auto n = static_cast<std::size_t>(cfg_.cycle.differences);
    if (returns_.size() < n + 1) return false;
    double dmin = INFINITY, dmax = -INFINITY, sum = 0.0, vmin = INFINITY, vmax = -INFINITY;
    for (std::size_t i = returns_.size() - n; i < returns_.size(); ++i) {
      const double dt = returns_[i].t - returns_[i - 1].t;
      dmin = std::min(dmin, dt);
      dmax = std::max(dmax, dt);
      sum += dt;
    }
    for (std::size_t i = returns_.size() - n - 1; i < returns_.size(); ++i) {
      vmin = std::min(vmin, returns_[i].v);
      vmax = std::max(vmax, returns_[i].v);
    }
    const double mean = sum / static_cast<double>(n);
    if (dmax - dmin > cfg_.cycle.period_rtol * mean || vmax - vmin > cfg_.cycle.state_tol) return false;
    out_.cycle = summary(true);
    return true;
  }

  CycleSummary summary(bool converged) const {
    CycleSummary c;
    c.period = returns_.back().t - returns_[returns_.size() - 2].t;
    c.u_min = period_.u_min;
    c.u_max = period_.u_max;
    c.v_min = period_.v_min;
    c.v_max = period_.v_max;
    const double len = period_.t_last - period_.t_start;
    c.mean = State{period_.integral.u / len, period_.integral.v / len};
    c.returns = static_cast<int>(returns_.size());
    c.converged = converged;
    return c;
  }

  struct Target {
    EquilibriumKind kind;
    State point;
  };

  const ScaledParams& prm_;
  const SimConfig& cfg_;
  Trajectory out_;
  std::vector<Target> targets_;
  std::optional<double> section_u_;
  double burn_in_ = 0.0;
  bool on_u_axis_ = false, on_v_axis_ = false;
  std::int64_t accepted_ = 0, rejected_ = 0;
  double max_clamp_ = 0.0;
  std::vector<Return> returns_;
  PeriodStats stats_, period_;
  bool have_period_ = false;
};

}  // namespace

void validate(const SimConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
  };
  validate(c.initial);
  require(std::isfinite(c.t_max) && c.t_max > 0.0, "t_max must be finite and > 0");
  require(c.rtol > 0.0 && c.rtol <= 1e-3, "rtol must lie in (0, 1e-3]");
  require(std::isfinite(c.atol) && c.atol > 0.0, "atol must be finite and > 0");
  require(c.max_step > 0.0, "max_step must be > 0");
  require(std::isfinite(c.initial_step) && c.initial_step >= 0.0, "initial_step must be >= 0");
  require(c.max_steps > 0, "max_steps must be > 0");
  require(c.convergence.radius > 0.0 && c.convergence.residual > 0.0, "convergence radius and residual must be > 0");
  require(c.cycle.burn_in_fraction >= 0.0 && c.cycle.burn_in_fraction < 1.0, "burn-in fraction must lie in [0, 1)");
  require(c.cycle.differences >= 1, "cycle detection needs at least one return difference");
  require(c.cycle.period_rtol > 0.0 && c.cycle.state_tol > 0.0, "cycle tolerances must be > 0");
  if (c.ball) {
    validate(c.ball->center);
    require(c.ball->inner >= 0.0 && c.ball->outer > c.ball->inner, "ball radii must satisfy 0 <= inner < outer");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::ConvergedToEquilibrium: return "converged-to-equilibrium";
    case Termination::CycleDetected: return "cycle-detected";
    case Termination::StepFailure: return "step-failure";
    case Termination::LeftBall: return "left-ball";
  }
  return "?";
}

Termination parse_termination(std::string_view name) {
  for (Termination t : {Termination::Horizon, Termination::ConvergedToEquilibrium, Termination::CycleDetected,
                        Termination::StepFailure, Termination::LeftBall})
    if (to_string(t) == name) return t;
  throw InvalidParameter("unknown termination: " + std::string(name));
}

std::string_view to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::Converges: return "converges";
    case ProbeOutcome::Escapes: return "escapes";
    case ProbeOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

Trajectory integrate(const ScaledParams& params, const SimConfig& cfg) {
  validate(params);
  validate(cfg);
  return Integrator(params, cfg).run();
}

std::optional<CycleSummary> detect_cycle(const ScaledParams& params, SimConfig cfg) {
  const EquilibriumReport rep = analyze(params);
  const auto* plus = rep.find(EquilibriumKind::PositivePlus);
  if (!plus || !plus->verdict || plus->verdict->tag != Verdict::Unstable) return std::nullopt;
  cfg.cycle.enabled = true;
  const Trajectory tr = integrate(params, cfg);
  if (tr.termination == Termination::StepFailure) throw NumericalFailure(tr.failure);
  if (tr.termination != Termination::CycleDetected)
    throw NumericalFailure("no stable section returns within t_max (terminated: " +
                           std::string(to_string(tr.termination)) + ")");
  return tr.cycle;
}

double probe_horizon(const ScaledParams& params, State e) {
  const Matrix2 J = jacobian(params, e);
  const auto ev = eigenvalues_from(trace(J), determinant(J));
  const double slow = std::min(std::abs(ev[0].real()), std::abs(ev[1].real()));
  if (slow < 1e-8) return 1e6;
  return std::min(1e6, std::max(200.0, 60.0 / slow));
}

ProbeResult stability_probe(const ScaledParams& params, State e, const ProbeOptions& opt) {
  validate(params);
  validate(e);
  if (!(opt.radius > 0.0) || !std::isfinite(opt.radius)) throw InvalidParameter("probe radius must be > 0");

  double offset = 0.0;
  if (opt.seed) {
    std::mt19937_64 rng(*opt.seed);
    offset = std::uniform_real_distribution<double>(0.0, std::numbers::pi / 4)(rng);
  }
  constexpr int kCandidates = 4096, kOrbits = 8;
  std::vector<State> admissible;
  for (int j = 0; j < kCandidates; ++j) {
    const double th = offset + 2.0 * std::numbers::pi * (j + 0.5) / kCandidates;
    const State s{e.u + opt.radius * std::cos(th), e.v + opt.radius * std::sin(th)};
    if (s.u > 0.0 && s.v > 0.0) admissible.push_back(s);
  }
  if (admissible.size() < kOrbits) throw InvalidParameter("probe circle has no room in the open quadrant");

  ProbeResult res;
  res.t_max = opt.t_max ? *opt.t_max : probe_horizon(params, e);
  bool all_in = true, any_out = false;
  for (int k = 0; k < kOrbits; ++k) {
    const auto idx = static_cast<std::size_t>((k + 0.5) * static_cast<double>(admissible.size()) / kOrbits);
    SimConfig cfg;
    cfg.initial = admissible[idx];
    cfg.t_max = res.t_max;
    cfg.rtol = opt.rtol;
    cfg.atol = opt.atol;
    cfg.record = false;
    cfg.ball = BallEvent{e, 0.1 * opt.radius, 10.0 * opt.radius, false};
    const Trajectory tr = integrate(params, cfg);
    ProbeOrbit o;
    o.start = cfg.initial;
    o.termination = tr.termination;
    o.t_end = tr.final_time();
    o.distance = distance(tr.final_state(), e);
    o.converged = tr.termination == Termination::ConvergedToEquilibrium && o.distance <= cfg.ball->inner;
    o.escaped = tr.left_ball;
    all_in = all_in && o.converged;
    any_out = any_out || (!o.converged && o.escaped);
    res.orbits.push_back(o);
  }
  res.outcome = all_in ? ProbeOutcome::Converges : any_out ? ProbeOutcome::Escapes : ProbeOutcome::Inconclusive;
  res.converges = res.outcome == ProbeOutcome::Converges;
  return res;
}

}  // namespace coop
