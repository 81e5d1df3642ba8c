#include "coop/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "coop/equilibria.hpp"
#include "coop/errors.hpp"
#include "coop/hopf.hpp"
#include "coop/io.hpp"
#include "coop/simulate.hpp"
#include "coop/stability.hpp"
#include "coop/svg.hpp"

namespace coop {

namespace fs = std::filesystem;

const std::vector<std::string> kReproduceTargets = {"fig1", "fig2"};

namespace {

const std::vector<std::string> kFormats = {"json", "csv", "svg", "table"};
const std::vector<std::string> kScaledKeys = {"b", "p", "q"};
const std::vector<std::string> kRawKeys = {"B", "K", "P", "Q", "C", "D"};

double* scaled_field(ScaledParams& s, const std::string& k) {
  if (k == "b") return &s.b;
  if (k == "p") return &s.p;
  if (k == "q") return &s.q;
  return nullptr;
}

double* raw_field(RawParams& r, const std::string& k) {
  if (k == "B") return &r.B;
  if (k == "K") return &r.K;
  if (k == "P") return &r.P;
  if (k == "Q") return &r.Q;
  if (k == "C") return &r.C;
  if (k == "D") return &r.D;
  return nullptr;
}

double parse_number(const std::string& text, const std::string& what) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end) throw InvalidParameter("cannot parse " + what + ": '" + text + "'");
  return x;
}

/// Parameter block read from key=value tokens or a JSON object. Keys not
/// given stay 0 and are listed in `missing`.
struct BlockInput {
  std::optional<ScaledParams> scaled;
  std::optional<RawParams> raw;
  std::vector<std::string> missing;
};

BlockInput block_from_map(const std::map<std::string, double>& values, bool scaled) {
  BlockInput in;
  const auto& keys = scaled ? kScaledKeys : kRawKeys;
  ScaledParams s;
  RawParams r;
  for (const auto& [k, v] : values) {
    double* f = scaled ? scaled_field(s, k) : raw_field(r, k);
    if (!f) throw InvalidParameter("unknown " + std::string(scaled ? "scaled" : "raw") + " parameter '" + k + "'");
    *f = v;
  }
  for (const auto& k : keys)
    if (!values.count(k)) in.missing.push_back(k);
  if (scaled)
    in.scaled = s;
  else
    in.raw = r;
  return in;
}

BlockInput block_from_tokens(const std::vector<std::string>& tokens, bool scaled) {
  std::map<std::string, double> values;
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidParameter("expected key=value, got '" + t + "'");
    const std::string key = t.substr(0, eq);
    if (values.count(key)) throw InvalidParameter("parameter '" + key + "' given twice");
    values[key] = parse_number(t.substr(eq + 1), key);
  }
  return block_from_map(values, scaled);
}

BlockInput block_from_json(const Json& j, bool scaled) {
  if (!j.is_object()) throw InvalidParameter("parameter block must be a JSON object");
  std::map<std::string, double> values;
  for (const auto& [k, v] : j.items()) values[k] = v.get<double>();
  return block_from_map(values, scaled);
}

/// Reads everything but the parameter block; keys not present keep their
/// current values.
void read_options(const Json& j, RunConfig& c) {
  if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("analyze")) {
    const Json& a = j.at("analyze");
    c.analyze.probe = a.value("probe", c.analyze.probe);
    c.analyze.radius = a.value("radius", c.analyze.radius);
  }
  if (j.contains("simulate")) {
    const Json& s = j.at("simulate");
    if (s.contains("initial")) c.simulate.initial = s.at("initial").get<State>();
    c.simulate.t_max = s.value("t_max", c.simulate.t_max);
    c.simulate.rtol = s.value("rtol", c.simulate.rtol);
    c.simulate.atol = s.value("atol", c.simulate.atol);
    c.simulate.max_steps = s.value("max_steps", c.simulate.max_steps);
    c.simulate.cycle = s.value("cycle", c.simulate.cycle);
    c.simulate.burn_in = s.value("burn_in", c.simulate.burn_in);
  }
  if (j.contains("sweep")) {
    const Json& s = j.at("sweep");
    if (s.contains("parameter")) c.sweep.parameter = parse_sweep_parameter(s.at("parameter").get<std::string>());
    c.sweep.lo = s.value("lo", c.sweep.lo);
    c.sweep.hi = s.value("hi", c.sweep.hi);
    c.sweep.points = s.value("points", c.sweep.points);
    c.sweep.probe = s.value("probe", c.sweep.probe);
    if (s.contains("attractor")) c.sweep.attractor = s.at("attractor").get<AttractorProbe>();
    c.sweep.threads = s.value("threads", c.sweep.threads);
  }
  if (j.contains("hopf")) c.hopf.locate = j.at("hopf").value("locate", c.hopf.locate);
  c.target = j.value("target", c.target);
  c.output_dir = j.value("output_dir", c.output_dir);
  if (j.contains("formats")) c.formats = j.at("formats").get<std::vector<std::string>>();
  c.seed = j.value("seed", c.seed);
}

BlockInput read_block(const Json& j) {
  const bool has_scaled = j.contains("scaled") && !j.at("scaled").is_null();
  const bool has_raw = j.contains("raw") && !j.at("raw").is_null();
  if (has_scaled && has_raw) throw InvalidParameter("config has both a scaled and a raw parameter block");
  if (has_scaled) return block_from_json(j.at("scaled"), true);
  if (has_raw) return block_from_json(j.at("raw"), false);
  return {};
}

/// The block key that q maps to, and the one a sweep overwrites.
std::string q_key(const BlockInput& b) { return b.scaled ? "q" : "Q"; }
std::string swept_key(const RunConfig& c, const BlockInput& b) {
  if (c.sweep.parameter == SweepParameter::Q) return b.scaled ? "q" : "";
  return b.raw ? "B" : "";
}

void install_block(RunConfig& c, const BlockInput& b) {
  c.scaled = b.scaled;
  c.raw = b.raw;
  if (b.scaled || b.raw) {
    const auto& m = b.missing;
    c.hopf.locate = std::find(m.begin(), m.end(), q_key(b)) != m.end();
  }
}

/// Missing keys are allowed only where the mode supplies the value.
void check_missing(const RunConfig& c, const BlockInput& b) {
  for (const auto& k : b.missing) {
    if (c.mode == Mode::Sweep && k == swept_key(c, b)) continue;
    if (c.mode == Mode::Hopf && k == q_key(b)) continue;
    throw InvalidParameter("missing parameter " + k);
  }
}

SimConfig sim_config(const SimulateOptions& o) {
  SimConfig s;
  s.initial = o.initial;
  s.t_max = o.t_max;
  s.rtol = o.rtol;
  s.atol = o.atol;
  s.max_steps = o.max_steps;
  s.cycle.enabled = o.cycle;
  s.cycle.burn_in_fraction = o.burn_in;
  return s;
}

SweepSpec sweep_spec(const RunConfig& c) {
  SweepSpec s;
  if (c.scaled)
    s.fixed = *c.scaled;
  else if (c.raw)
    s.fixed = *c.raw;
  s.parameter = c.sweep.parameter;
  s.lo = c.sweep.lo;
  s.hi = c.sweep.hi;
  s.points = c.sweep.points;
  if (c.sweep.probe) s.probe = c.sweep.attractor;
  s.threads = c.sweep.threads;
  return s;
}

ScaledParams scaled_params(const RunConfig& c) { return c.scaled ? *c.scaled : nondimensionalize(*c.raw); }

// ---- text output ----------------------------------------------------------

std::string num(double x) {
  if (std::isnan(x)) return "-";
  if (x == 0.0) x = 0.0;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : "-"; }

/// Left-aligned to `width`, always followed by at least two spaces.
std::string cell(std::string s, std::size_t width) {
  s.resize(std::max(width, s.size() + 2), ' ');
  return s;
}

std::string complex_text(std::complex<double> z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

void print_report(std::ostream& out, const EquilibriumReport& rep, const std::optional<NonScaledReport>& ns,
                  const std::vector<std::pair<EquilibriumKind, ProbeResult>>& probes) {
  const ScaledParams& p = rep.params;
  if (ns) {
    const RawParams& r = ns->raw;
    out << "raw parameters:    B=" << num(r.B) << " K=" << num(r.K) << " P=" << num(r.P) << " Q=" << num(r.Q)
        << " C=" << num(r.C) << " D=" << num(r.D) << "  (R0=" << num(ns->thresholds.r0) << ")\n";
  }
  out << "scaled parameters: b=" << num(p.b) << " p=" << num(p.p) << " q=" << num(p.q) << "\n";
  out << "existence:         " << to_string(rep.existence) << "\n";
  out << "roots s > 1:      ";
  if (rep.roots.empty()) out << " none";
  for (double s : rep.roots) out << " " << num(s);
  out << "\n";
  out << "thresholds:        q0=" << num(rep.q0) << " qh=" << num(rep.qh) << " b*=" << num(rep.b_threshold) << "\n\n";

  out << cell("kind", 6) << cell("u", 15) << cell("v", 15) << cell("trace", 15) << cell("det", 15)
      << cell("eigenvalues", 44) << cell("verdict", 21) << "reason\n";
  for (const auto& e : rep.equilibria) {
    out << cell(std::string(to_string(e.kind)), 6) << cell(num(e.point.u), 15) << cell(num(e.point.v), 15)
        << cell(num(e.trace), 15) << cell(num(e.determinant), 15)
        << cell(complex_text(e.eigenvalues[0]) + ", " + complex_text(e.eigenvalues[1]), 44)
        << cell(e.verdict ? std::string(to_string(e.verdict->tag)) : "-", 21)
        << (e.verdict ? e.verdict->witness : "") << "\n";
  }
  if (ns) {
    out << "\nin original units:\n";
    for (const auto& e : ns->equilibria)
      out << cell(std::string(to_string(e.kind)), 6) << "U=" << num(e.point.U) << " V=" << num(e.point.V) << "\n";
  }
  for (const auto& e : rep.equilibria) {
    if (e.verdict && e.verdict->witness.find("critically stable") != std::string::npos)
      out << "\nnote: " << to_string(e.kind)
          << " is critically stable; the linearization has a zero eigenvalue and orbits approach at an algebraic"
             " (cubic) rate along the center manifold\n";
  }
  if (!probes.empty()) {
    out << "\nstability probes:\n";
    for (const auto& [kind, r] : probes)
      out << cell(std::string(to_string(kind)), 6) << to_string(r.outcome) << " (t_max=" << num(r.t_max) << ")\n";
  }
}

// ---- commands --------------------------------------------------------------

class Output {
 public:
  Output(const RunConfig& c, std::ostream& out) : dir_(c.output_dir), out_(out) {}

  void write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    write_file_atomic(p, content);
    out_ << "wrote " << p.string() << "\n";
  }

 private:
  fs::path dir_;
  std::ostream& out_;
};

void check_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InvalidParameter("cannot create output directory " + dir);
  const fs::path probe = fs::path(dir) / ".cooppred-write-check";
  {
    std::ofstream f(probe);
    if (!f) throw InvalidParameter("output directory is not writable: " + dir);
  }
  fs::remove(probe, ec);
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
  Json j;
  j["config"] = c;
  EquilibriumReport rep;
  std::optional<NonScaledReport> ns;
  if (c.raw) {
    ns = classify_nonscaled(*c.raw);
    rep = ns->scaled_report;
    j["nonscaled"] = *ns;
  } else {
    rep = analyze(*c.scaled);
  }
  j["report"] = rep;

  std::vector<std::pair<EquilibriumKind, ProbeResult>> probes;
  if (c.analyze.probe) {
    Json list = Json::array();
    for (const auto& e : rep.equilibria) {
      ProbeOptions o;
      o.radius = c.analyze.radius;
      o.seed = c.seed;
      probes.emplace_back(e.kind, stability_probe(rep.params, e.point, o));
      list.push_back({{"kind", to_string(e.kind)}, {"result", probes.back().second}});
    }
    j["probes"] = list;
  }
  if (c.wants("table")) print_report(out, rep, ns, probes);
  if (c.wants("json")) Output(c, out).write("analyze.json", j.dump(2) + "\n");
  return 0;
}

Json trajectory_json(const RunConfig& c, const ScaledParams& prm, const Trajectory& tr) {
  Json j;
  j["config"] = c;
  j["params"] = prm;
  j["termination"] = to_string(tr.termination);
  j["failure"] = tr.failure;
  j["final_time"] = tr.final_time();
  j["final_state"] = tr.final_state();
  j["converged_to"] = tr.converged_to ? Json(to_string(*tr.converged_to)) : Json(nullptr);
  j["cycle"] = tr.cycle ? Json(*tr.cycle) : Json(nullptr);
  j["samples"] = tr.times.size();
  j["accepted_steps"] = tr.accepted_steps;
  j["rejected_steps"] = tr.rejected_steps;
  j["max_clamp"] = tr.max_clamp;
  return j;
}

void print_trajectory(std::ostream& out, const Trajectory& tr) {
  const State s = tr.final_state();
  out << "termination: " << to_string(tr.termination);
  if (tr.converged_to) out << " (" << to_string(*tr.converged_to) << ")";
  out << " at t=" << num(tr.final_time()) << ", state (" << num(s.u) << ", " << num(s.v) << ")\n";
  if (!tr.failure.empty()) out << "failure: " << tr.failure << "\n";
  if (tr.cycle) {
    const CycleSummary& cy = *tr.cycle;
    out << "cycle: period " << num(cy.period) << ", u in [" << num(cy.u_min) << ", " << num(cy.u_max) << "], v in ["
        << num(cy.v_min) << ", " << num(cy.v_max) << "], " << cy.returns << " returns"
        << (cy.converged ? "" : " (not converged)") << "\n";
  }
}

Trajectory run_and_emit(const RunConfig& c, const ScaledParams& prm, const SimConfig& sc, const std::string& stem,
                        const std::string& title, std::ostream& out) {
  const Trajectory tr = integrate(prm, sc);
  Output o(c, out);
  if (c.wants("table")) print_trajectory(out, tr);
  if (c.wants("csv")) o.write(stem + ".csv", trajectory_csv(tr));
  if (c.wants("svg")) o.write(stem + ".svg", phase_portrait_svg(tr, analyze(prm), title));
  if (c.wants("json")) o.write(stem + ".json", trajectory_json(c, prm, tr).dump(2) + "\n");
  return tr;
}

std::string params_title(const ScaledParams& p) {
  return "b=" + num(p.b) + ", p=" + num(p.p) + ", q=" + num(p.q);
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ScaledParams prm = scaled_params(c);
  const Trajectory tr = run_and_emit(c, prm, sim_config(c.simulate), "simulate", params_title(prm), out);
  if (tr.termination == Termination::StepFailure) {
    err << "error: step-failure: " << tr.failure << "\n";
    return 3;
  }
  return 0;
}

std::vector<Marker> sweep_markers(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::vector<Marker> m;
  if (spec.parameter == SweepParameter::Q) {
    const ScaledParams& p = std::get<ScaledParams>(spec.fixed);
    if (p.p <= 1.0) m.push_back({q0_threshold(p), "q0"});
    if (p.p + p.b > 1.0 && hopf_assumptions_hold(p)) m.push_back({qh_threshold(p), "qh"});
    return m;
  }
  // No closed form in B: refine every cell whose ends straddle a threshold.
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const SweepRow &a = rows[i], &b = rows[i + 1];
    auto refine = [&](ThresholdKind kind, const char* label) {
      ThresholdQuery q;
      q.fixed = spec.fixed;
      q.parameter = spec.parameter;
      q.lo = a.param;
      q.hi = b.param;
      q.kind = kind;
      try {
        m.push_back({locate_threshold(q), label});
      } catch (const Error&) {
        m.push_back({0.5 * (a.param + b.param), label});
      }
    };
    if (a.q0 && b.q0 && (a.scaled.q - *a.q0) * (b.scaled.q - *b.q0) <= 0.0) refine(ThresholdKind::Existence, "q0");
    if (a.qh && b.qh && (a.scaled.q - *a.qh) * (b.scaled.q - *b.qh) <= 0.0) refine(ThresholdKind::TracePlus, "qh");
  }
  return m;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = sweep_spec(c);
  const auto rows = run_sweep(spec);
  int failed = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) {
      ++failed;
      err << "warning: row " << to_string(spec.parameter) << "=" << num(r.param) << ": " << r.error << "\n";
    }
  if (c.wants("table"))
    out << rows.size() << " rows, " << failed << " with errors\n";
  Output o(c, out);
  if (c.wants("csv")) o.write("sweep.csv", sweep_csv(rows));
  if (c.wants("svg")) {
    std::string title;
    if (const auto* s = std::get_if<ScaledParams>(&spec.fixed))
      title = "b=" + num(s->b) + ", p=" + num(s->p);
    else
      title = "sweep in B";
    o.write("sweep.svg", bifurcation_svg(rows, spec.parameter, sweep_markers(spec, rows), title));
  }
  return 0;
}

int cmd_hopf(const RunConfig& c, std::ostream& out) {
  ScaledParams prm = scaled_params(c);
  HopfData h;
  if (c.hopf.locate) {
    const auto found = find_hopf_in_q(prm.b, prm.p);
    if (!found) {
      if (prm.p + prm.b <= 1.0) throw AssumptionViolated("no Hopf point: p + b <= 1");
      throw AssumptionViolated("no stability switch of E+ in q: p <= 1 and b <= b_threshold(p)");
    }
    h = *found;
  } else {
    h = hopf_data(prm);
  }
  prm.q = h.qh;
  const double oracle = lyapunov_oracle(prm);
  if (c.wants("table")) {
    out << "Hopf point:  b=" << num(prm.b) << " p=" << num(prm.p) << " q_h=" << num(h.qh) << "\n";
    out << "s=" << num(h.s) << " z=" << num(h.z) << " w=" << num(h.w) << " period 2pi/w=" << num(2 * std::numbers::pi / h.w)
        << "\n";
    out << "g20=" << complex_text(h.g20) << " g11=" << complex_text(h.g11) << " g21=" << complex_text(h.g21) << "\n";
    out << "l1 closed form " << num(h.l1) << ", expansion " << num(h.l1_expansion) << ", oracle " << num(oracle)
        << "\n";
    out << (h.l1 < 0 ? "supercritical: a stable limit cycle is born for q > q_h\n"
                     : "not supercritical\n");
  }
  if (c.wants("json")) {
    Json j;
    j["config"] = c;
    j["params"] = prm;
    j["hopf"] = h;
    j["lyapunov_oracle"] = oracle;
    j["supercritical"] = h.l1 < 0;
    Output(c, out).write("hopf.json", j.dump(2) + "\n");
  }
  return 0;
}

int cmd_reproduce(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ScaledParams prm = *c.scaled;
  const std::string title = c.target + ": " + params_title(prm);
  const Trajectory tr = run_and_emit(c, prm, sim_config(c.simulate), c.target, title, out);
  if (c.target == "fig1" && tr.termination != Termination::ConvergedToEquilibrium) {
    err << "error: no convergence by t=" << num(tr.final_time()) << " (" << to_string(tr.termination) << ")\n";
    return 3;
  }
  if (c.target == "fig2" && tr.termination != Termination::CycleDetected) {
    err << "error: no limit cycle confirmed by t=" << num(tr.final_time()) << " (" << to_string(tr.termination)
        << ")\n";
    return 3;
  }
  return 0;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.mode) {
    case Mode::Analyze: return cmd_analyze(c, out);
    case Mode::Simulate: return cmd_simulate(c, out, err);
    case Mode::Sweep: return cmd_sweep(c, out, err);
    case Mode::Hopf: return cmd_hopf(c, out);
    case Mode::Reproduce: return cmd_reproduce(c, out, err);
  }
  return 2;
}

// ---- argument parsing ------------------------------------------------------

struct Flags {
  std::string config;
  std::vector<std::string> scaled, raw, formats;
  std::string out;
  std::uint64_t seed = 0;
  bool probe = false;
  double radius = 0.0;
  std::vector<double> init;
  double t_max = 0.0, rtol = 0.0, atol = 0.0, burn_in = 0.0;
  std::int64_t max_steps = 0;
  bool cycle = false;
  std::string param;
  std::vector<double> range;
  int points = 0;
  unsigned threads = 0;
  std::string target;
};

bool given(CLI::App* app, const std::string& name) {
  const CLI::Option* o = app->get_option_no_throw(name);
  return o && o->count() > 0;
}

void add_common(CLI::App* app, Flags& f, bool with_params) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  if (with_params) {
    auto* s = app->add_option("--scaled", f.scaled, "scaled parameters, e.g. b=0.5 p=1.5 q=4");
    auto* r = app->add_option("--raw", f.raw, "raw parameters, e.g. B=0.5 K=1 P=1.5 Q=4 C=1 D=1");
    s->excludes(r);
  }
  app->add_option("--out", f.out, "output directory (default: COOPPRED_OUTPUT_DIR, then .)");
  app->add_option("--format", f.formats, "comma-separated subset of json,csv,svg,table")->delimiter(',');
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Analyze: return "analyze";
    case Mode::Simulate: return "simulate";
    case Mode::Sweep: return "sweep";
    case Mode::Hopf: return "hopf";
    case Mode::Reproduce: return "reproduce";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::Analyze, Mode::Simulate, Mode::Sweep, Mode::Hopf, Mode::Reproduce})
    if (to_string(m) == name) return m;
  throw InvalidParameter("unknown mode: " + std::string(name));
}

bool RunConfig::wants(std::string_view format) const {
  return formats.empty() || std::find(formats.begin(), formats.end(), format) != formats.end();
}

void to_json(Json& j, const RunConfig& c) {
  j = Json::object();
  j["mode"] = to_string(c.mode);
  j["scaled"] = c.scaled ? Json(*c.scaled) : Json(nullptr);
  j["raw"] = c.raw ? Json(*c.raw) : Json(nullptr);
  j["analyze"] = {{"probe", c.analyze.probe}, {"radius", c.analyze.radius}};
  j["simulate"] = {{"initial", c.simulate.initial}, {"t_max", c.simulate.t_max},
                   {"rtol", c.simulate.rtol},       {"atol", c.simulate.atol},
                   {"max_steps", c.simulate.max_steps}, {"cycle", c.simulate.cycle},
                   {"burn_in", c.simulate.burn_in}};
  j["sweep"] = {{"parameter", to_string(c.sweep.parameter)},
                {"lo", c.sweep.lo},
                {"hi", c.sweep.hi},
                {"points", c.sweep.points},
                {"probe", c.sweep.probe},
                {"attractor", c.sweep.attractor},
                {"threads", c.sweep.threads}};
  j["hopf"] = {{"locate", c.hopf.locate}};
  j["target"] = c.target;
  j["output_dir"] = c.output_dir;
  j["formats"] = c.formats;
  j["seed"] = c.seed;
}

void from_json(const Json& j, RunConfig& c) {
  c = RunConfig{};
  install_block(c, read_block(j));
  read_options(j, c);
}

void validate(const RunConfig& c) {
  for (const auto& f : c.formats)
    if (std::find(kFormats.begin(), kFormats.end(), f) == kFormats.end())
      throw InvalidParameter("unknown output format '" + f + "' (valid: json, csv, svg, table)");
  if (c.output_dir.empty()) throw InvalidParameter("output directory must not be empty");
  if (c.mode == Mode::Reproduce) {
    if (std::find(kReproduceTargets.begin(), kReproduceTargets.end(), c.target) == kReproduceTargets.end())
      reproduce_config(c.target);
  }
  if (c.scaled.has_value() == c.raw.has_value())
    throw InvalidParameter("exactly one of --scaled and --raw is required");
  switch (c.mode) {
    case Mode::Analyze:
    case Mode::Hopf:
      if (c.scaled) validate(*c.scaled);
      if (c.raw) validate(*c.raw);
      if (c.mode == Mode::Analyze && !(c.analyze.radius > 0.0)) throw InvalidParameter("probe radius must be > 0");
      break;
    case Mode::Simulate:
    case Mode::Reproduce:
      if (c.raw) nondimensionalize(*c.raw);
      if (c.scaled) validate(*c.scaled);
      validate(sim_config(c.simulate));
      break;
    case Mode::Sweep: validate(sweep_spec(c)); break;
  }
}

RunConfig reproduce_config(const std::string& target) {
  RunConfig c;
  c.mode = Mode::Reproduce;
  c.target = target;
  c.simulate.initial = {0.4, 0.1};
  c.simulate.rtol = 1e-10;
  c.simulate.atol = 1e-13;
  if (target == "fig1") {
    c.scaled = ScaledParams{0.5, 1.5, 3.99};
    c.simulate.t_max = 1e5;
  } else if (target == "fig2") {
    c.scaled = ScaledParams{0.5, 1.5, 4.01};
    c.simulate.t_max = 6e4;
    c.simulate.cycle = true;
  } else {
    std::string valid;
    for (const auto& t : kReproduceTargets) valid += (valid.empty() ? "" : ", ") + t;
    throw InvalidParameter("unknown reproduce target '" + target + "'; valid targets: " + valid);
  }
  return c;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalFailure*>(&e)) return 3;
  if (dynamic_cast<const AssumptionViolated*>(&e) || dynamic_cast<const NotAtHopf*>(&e) ||
      dynamic_cast<const UndefinedThreshold*>(&e))
    return 4;
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Cooperative predation predator-prey model: equilibria, stability, Hopf analysis and simulation",
               "cooppred");
  app.require_subcommand(1);
  Flags f;

  auto* analyze_cmd = app.add_subcommand("analyze", "equilibria and their stability");
  add_common(analyze_cmd, f, true);
  analyze_cmd->add_flag("--probe", f.probe, "also probe every equilibrium numerically");
  analyze_cmd->add_option("--radius", f.radius, "probe radius");
  analyze_cmd->add_option("--seed", f.seed, "rotation seed for probe starting points");

  auto* simulate_cmd = app.add_subcommand("simulate", "integrate one orbit");
  add_common(simulate_cmd, f, true);
  simulate_cmd->add_option("--init", f.init, "initial state u,v")->delimiter(',')->expected(2);
  simulate_cmd->add_option("--t-max", f.t_max, "time horizon");
  simulate_cmd->add_option("--rtol", f.rtol, "relative tolerance");
  simulate_cmd->add_option("--atol", f.atol, "absolute tolerance");
  simulate_cmd->add_option("--max-steps", f.max_steps, "step budget");
  simulate_cmd->add_flag("--cycle", f.cycle, "stop once a limit cycle is confirmed");
  simulate_cmd->add_option("--burn-in", f.burn_in, "fraction of t_max ignored by cycle detection");

  auto* sweep_cmd = app.add_subcommand("sweep", "analysis over a parameter grid");
  add_common(sweep_cmd, f, true);
  sweep_cmd->add_option("--param", f.param, "swept parameter: q (scaled) or B (raw)");
  sweep_cmd->add_option("--range", f.range, "lo,hi")->delimiter(',')->expected(2);
  sweep_cmd->add_option("--points", f.points, "grid points");
  sweep_cmd->add_flag("--probe", f.probe, "simulate each row to find its attractor");
  sweep_cmd->add_option("--init", f.init, "attractor probe initial state u,v")->delimiter(',')->expected(2);
  sweep_cmd->add_option("--t-max", f.t_max, "attractor probe horizon");
  sweep_cmd->add_option("--threads", f.threads, "worker threads (0: hardware concurrency)");

  auto* hopf_cmd = app.add_subcommand("hopf", "normal form at the Hopf point (q omitted: solve for q_h)");
  add_common(hopf_cmd, f, true);

  auto* reproduce_cmd = app.add_subcommand("reproduce", "rerun a reference experiment (fig1, fig2)");
  add_common(reproduce_cmd, f, false);
  reproduce_cmd->add_option("target", f.target, "fig1 or fig2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = nullptr;
  Mode mode = Mode::Analyze;
  for (auto [cmd, m] : {std::pair{analyze_cmd, Mode::Analyze}, std::pair{simulate_cmd, Mode::Simulate},
                        std::pair{sweep_cmd, Mode::Sweep}, std::pair{hopf_cmd, Mode::Hopf},
                        std::pair{reproduce_cmd, Mode::Reproduce}})
    if (cmd->parsed()) {
      sub = cmd;
      mode = m;
    }

  try {
    RunConfig c;
    BlockInput block;
    if (mode == Mode::Reproduce) {
      try {
        c = reproduce_config(f.target);
      } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << "\n" << reproduce_cmd->help();
        return 2;
      }
    }
    if (!f.config.empty()) {
      Json j;
      try {
        j = Json::parse(read_file(f.config));
      } catch (const Json::exception& e) {
        throw InvalidParameter("bad config file " + f.config + ": " + e.what());
      }
      if (mode == Mode::Reproduce) {
        // Presets stay fixed; only output settings come from the file.
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("formats")) c.formats = j.at("formats").get<std::vector<std::string>>();
      } else {
        block = read_block(j);
        install_block(c, block);
        read_options(j, c);
      }
    }
    c.mode = mode;

    if (given(sub, "--scaled")) block = block_from_tokens(f.scaled, true);
    if (given(sub, "--raw")) block = block_from_tokens(f.raw, false);
    if (given(sub, "--scaled") || given(sub, "--raw")) install_block(c, block);

    if (given(sub, "--format")) c.formats = f.formats;
    if (given(sub, "--seed")) c.seed = f.seed;
    if (given(sub, "--probe")) (mode == Mode::Sweep ? c.sweep.probe : c.analyze.probe) = f.probe;
    if (given(sub, "--radius")) c.analyze.radius = f.radius;
    if (given(sub, "--init")) (mode == Mode::Sweep ? c.sweep.attractor.initial : c.simulate.initial) = {f.init[0], f.init[1]};
    if (given(sub, "--t-max")) (mode == Mode::Sweep ? c.sweep.attractor.t_max : c.simulate.t_max) = f.t_max;
    if (given(sub, "--rtol")) c.simulate.rtol = f.rtol;
    if (given(sub, "--atol")) c.simulate.atol = f.atol;
    if (given(sub, "--max-steps")) c.simulate.max_steps = f.max_steps;
    if (given(sub, "--cycle")) c.simulate.cycle = f.cycle;
    if (given(sub, "--burn-in")) c.simulate.burn_in = f.burn_in;
    if (given(sub, "--param")) c.sweep.parameter = parse_sweep_parameter(f.param);
    if (given(sub, "--range")) {
      c.sweep.lo = f.range[0];
      c.sweep.hi = f.range[1];
    }
    if (given(sub, "--points")) c.sweep.points = f.points;
    if (given(sub, "--threads")) c.sweep.threads = f.threads;

    if (given(sub, "--out")) {
      c.output_dir = f.out;
    } else if (const char* env = std::getenv("COOPPRED_OUTPUT_DIR"); env && *env) {
      c.output_dir = env;
    }

    if (mode != Mode::Reproduce) check_missing(c, block);
    validate(c);
    const bool writes = c.wants("json") || c.wants("csv") || c.wants("svg");
    if (writes) check_output_dir(c.output_dir);
    return dispatch(c, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"cooppred"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace coop
