#include "coop/json_io.hpp"

#include <cmath>
#include <limits>

namespace coop {

namespace {

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double get_num(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

double get_num(const Json& j, const char* key) { return get_num(j.at(key)); }

Json opt_num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

std::optional<double> get_opt_num(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json complex_pair(const std::array<std::complex<double>, 2>& z) {
  return Json::array({Json::array({num(z[0].real()), num(z[0].imag())}),
                      Json::array({num(z[1].real()), num(z[1].imag())})});
}

std::array<std::complex<double>, 2> get_complex_pair(const Json& j) {
  return {std::complex<double>(get_num(j.at(0).at(0)), get_num(j.at(0).at(1))),
          std::complex<double>(get_num(j.at(1).at(0)), get_num(j.at(1).at(1)))};
}

Json complex_value(std::complex<double> z) { return Json::array({num(z.real()), num(z.imag())}); }

std::complex<double> get_complex(const Json& j) { return {get_num(j.at(0)), get_num(j.at(1))}; }

Json opt_verdict(const std::optional<StabilityVerdict>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<StabilityVerdict> get_opt_verdict(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<StabilityVerdict>();
}

}  // namespace

void to_json(Json& j, const ScaledParams& x) { j = {{"b", num(x.b)}, {"p", num(x.p)}, {"q", num(x.q)}}; }
void from_json(const Json& j, ScaledParams& x) {
  x.b = get_num(j, "b");
  x.p = get_num(j, "p");
  x.q = get_num(j, "q");
}

void to_json(Json& j, const RawParams& x) {
  j = {{"B", num(x.B)}, {"K", num(x.K)}, {"P", num(x.P)}, {"Q", num(x.Q)}, {"C", num(x.C)}, {"D", num(x.D)}};
}
void from_json(const Json& j, RawParams& x) {
  x.B = get_num(j, "B");
  x.K = get_num(j, "K");
  x.P = get_num(j, "P");
  x.Q = get_num(j, "Q");
  x.C = get_num(j, "C");
  x.D = get_num(j, "D");
}

void to_json(Json& j, const State& x) { j = Json::array({num(x.u), num(x.v)}); }
void from_json(const Json& j, State& x) {
  x.u = get_num(j.at(0));
  x.v = get_num(j.at(1));
}

void to_json(Json& j, const RawState& x) { j = Json::array({num(x.U), num(x.V)}); }
void from_json(const Json& j, RawState& x) {
  x.U = get_num(j.at(0));
  x.V = get_num(j.at(1));
}

void to_json(Json& j, const StabilityVerdict& x) { j = {{"tag", to_string(x.tag)}, {"witness", x.witness}}; }
void from_json(const Json& j, StabilityVerdict& x) {
  x.tag = parse_verdict(j.at("tag").get<std::string>());
  x.witness = j.at("witness").get<std::string>();
}

void to_json(Json& j, const EquilibriumEntry& x) {
  j = {{"kind", to_string(x.kind)},
       {"point", x.point},
       {"s", opt_num(x.s)},
       {"trace", num(x.trace)},
       {"determinant", num(x.determinant)},
       {"eigenvalues", complex_pair(x.eigenvalues)},
       {"verdict", opt_verdict(x.verdict)}};
}
void from_json(const Json& j, EquilibriumEntry& x) {
  x.kind = parse_equilibrium_kind(j.at("kind").get<std::string>());
  x.point = j.at("point").get<State>();
  x.s = get_opt_num(j, "s");
  x.trace = get_num(j, "trace");
  x.determinant = get_num(j, "determinant");
  x.eigenvalues = get_complex_pair(j.at("eigenvalues"));
  x.verdict = get_opt_verdict(j, "verdict");
}

void to_json(Json& j, const EquilibriumReport& x) {
  Json roots = Json::array();
  for (double r : x.roots) roots.push_back(num(r));
  j = {{"params", x.params},
       {"existence", to_string(x.existence)},
       {"roots", roots},
       {"equilibria", x.equilibria},
       {"q0", opt_num(x.q0)},
       {"qh", opt_num(x.qh)},
       {"b_threshold", opt_num(x.b_threshold)}};
}
void from_json(const Json& j, EquilibriumReport& x) {
  x.params = j.at("params").get<ScaledParams>();
  x.existence = parse_existence_class(j.at("existence").get<std::string>());
  x.roots.clear();
  for (const Json& r : j.at("roots")) x.roots.push_back(get_num(r));
  x.equilibria = j.at("equilibria").get<std::vector<EquilibriumEntry>>();
  x.q0 = get_opt_num(j, "q0");
  x.qh = get_opt_num(j, "qh");
  x.b_threshold = get_opt_num(j, "b_threshold");
}

void to_json(Json& j, const RawEquilibrium& x) {
  j = {{"kind", to_string(x.kind)},
       {"point", x.point},
       {"eigenvalues", complex_pair(x.eigenvalues)},
       {"verdict", opt_verdict(x.verdict)}};
}
void from_json(const Json& j, RawEquilibrium& x) {
  x.kind = parse_equilibrium_kind(j.at("kind").get<std::string>());
  x.point = j.at("point").get<RawState>();
  x.eigenvalues = get_complex_pair(j.at("eigenvalues"));
  x.verdict = get_opt_verdict(j, "verdict");
}

void to_json(Json& j, const NonScaledThresholds& x) {
  j = {{"r0", num(x.r0)},
       {"cooperation", num(x.cooperation)},
       {"hopf_bound", opt_num(x.hopf_bound)},
       {"existence_lhs", num(x.existence_lhs)},
       {"existence_bound", opt_num(x.existence_bound)},
       {"birth_lhs", num(x.birth_lhs)},
       {"birth_bound", opt_num(x.birth_bound)},
       {"critical_lhs", num(x.critical_lhs)},
       {"critical_bound", num(x.critical_bound)}};
}
void from_json(const Json& j, NonScaledThresholds& x) {
  x.r0 = get_num(j, "r0");
  x.cooperation = get_num(j, "cooperation");
  x.hopf_bound = get_opt_num(j, "hopf_bound");
  x.existence_lhs = get_num(j, "existence_lhs");
  x.existence_bound = get_opt_num(j, "existence_bound");
  x.birth_lhs = get_num(j, "birth_lhs");
  x.birth_bound = get_opt_num(j, "birth_bound");
  x.critical_lhs = get_num(j, "critical_lhs");
  x.critical_bound = get_num(j, "critical_bound");
}

void to_json(Json& j, const NonScaledReport& x) {
  j = {{"raw", x.raw},
       {"scaled", x.scaled},
       {"scaled_report", x.scaled_report},
       {"equilibria", x.equilibria},
       {"thresholds", x.thresholds}};
}
void from_json(const Json& j, NonScaledReport& x) {
  x.raw = j.at("raw").get<RawParams>();
  x.scaled = j.at("scaled").get<ScaledParams>();
  x.scaled_report = j.at("scaled_report").get<EquilibriumReport>();
  x.equilibria = j.at("equilibria").get<std::vector<RawEquilibrium>>();
  x.thresholds = j.at("thresholds").get<NonScaledThresholds>();
}

void to_json(Json& j, const HopfData& x) {
  j = {{"qh", num(x.qh)},
       {"s", num(x.s)},
       {"z", num(x.z)},
       {"w", num(x.w)},
       {"g20", complex_value(x.g20)},
       {"g11", complex_value(x.g11)},
       {"g21", complex_value(x.g21)},
       {"l1", num(x.l1)},
       {"l1_expansion", num(x.l1_expansion)}};
}
void from_json(const Json& j, HopfData& x) {
  x.qh = get_num(j, "qh");
  x.s = get_num(j, "s");
  x.z = get_num(j, "z");
  x.w = get_num(j, "w");
  x.g20 = get_complex(j.at("g20"));
  x.g11 = get_complex(j.at("g11"));
  x.g21 = get_complex(j.at("g21"));
  x.l1 = get_num(j, "l1");
  x.l1_expansion = get_num(j, "l1_expansion");
}

void to_json(Json& j, const CycleSummary& x) {
  j = {{"period", num(x.period)}, {"u_min", num(x.u_min)},  {"u_max", num(x.u_max)},
       {"v_min", num(x.v_min)},   {"v_max", num(x.v_max)},  {"mean", x.mean},
       {"returns", x.returns},    {"converged", x.converged}};
}
void from_json(const Json& j, CycleSummary& x) {
  x.period = get_num(j, "period");
  x.u_min = get_num(j, "u_min");
  x.u_max = get_num(j, "u_max");
  x.v_min = get_num(j, "v_min");
  x.v_max = get_num(j, "v_max");
  x.mean = j.at("mean").get<State>();
  x.returns = j.at("returns").get<int>();
  x.converged = j.at("converged").get<bool>();
}

void to_json(Json& j, const AttractorProbe& x) {
  j = {{"initial", x.initial},           {"t_max", num(x.t_max)}, {"auto_horizon", x.auto_horizon},
       {"horizon_cap", num(x.horizon_cap)}, {"rtol", num(x.rtol)},   {"atol", num(x.atol)},
       {"max_steps", x.max_steps}};
}
void from_json(const Json& j, AttractorProbe& x) {
  AttractorProbe d;
  x.initial = j.contains("initial") ? j.at("initial").get<State>() : d.initial;
  x.t_max = j.value("t_max", d.t_max);
  x.auto_horizon = j.value("auto_horizon", d.auto_horizon);
  x.horizon_cap = j.value("horizon_cap", d.horizon_cap);
  x.rtol = j.value("rtol", d.rtol);
  x.atol = j.value("atol", d.atol);
  x.max_steps = j.value("max_steps", d.max_steps);
}

void to_json(Json& j, const ProbeOrbit& x) {
  j = {{"start", x.start},         {"termination", to_string(x.termination)}, {"converged", x.converged},
       {"escaped", x.escaped},     {"t_end", num(x.t_end)},                   {"distance", num(x.distance)}};
}

void to_json(Json& j, const ProbeResult& x) {
  j = {{"outcome", to_string(x.outcome)}, {"converges", x.converges}, {"t_max", num(x.t_max)}, {"orbits", x.orbits}};
}

}  // namespace coop
