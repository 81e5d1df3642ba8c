#pragma once

#include "coop/hopf.hpp"
#include "coop/report.hpp"
#include "coop/simulate.hpp"
#include "coop/stability.hpp"
#include "coop/sweep.hpp"
#include "json.hpp"

namespace coop {

using Json = nlohmann::json;

// Non-finite doubles are written as null and read back as NaN.

void to_json(Json& j, const ScaledParams& x);
void from_json(const Json& j, ScaledParams& x);
void to_json(Json& j, const RawParams& x);
void from_json(const Json& j, RawParams& x);
void to_json(Json& j, const State& x);
void from_json(const Json& j, State& x);
void to_json(Json& j, const RawState& x);
void from_json(const Json& j, RawState& x);

void to_json(Json& j, const StabilityVerdict& x);
void from_json(const Json& j, StabilityVerdict& x);
void to_json(Json& j, const EquilibriumEntry& x);
void from_json(const Json& j, EquilibriumEntry& x);
void to_json(Json& j, const EquilibriumReport& x);
void from_json(const Json& j, EquilibriumReport& x);
void to_json(Json& j, const RawEquilibrium& x);
void from_json(const Json& j, RawEquilibrium& x);
void to_json(Json& j, const NonScaledThresholds& x);
void from_json(const Json& j, NonScaledThresholds& x);
void to_json(Json& j, const NonScaledReport& x);
void from_json(const Json& j, NonScaledReport& x);

void to_json(Json& j, const HopfData& x);
void from_json(const Json& j, HopfData& x);
void to_json(Json& j, const CycleSummary& x);
void from_json(const Json& j, CycleSummary& x);
void to_json(Json& j, const AttractorProbe& x);
void from_json(const Json& j, AttractorProbe& x);
void to_json(Json& j, const ProbeOrbit& x);
void to_json(Json& j, const ProbeResult& x);

}  // namespace coop
