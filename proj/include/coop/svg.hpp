#pragma once

#include <string>
#include <vector>

#include "coop/report.hpp"
#include "coop/simulate.hpp"
#include "coop/sweep.hpp"

namespace coop {

/// Orbit in the (u, v) plane with the equilibria of `report` marked: filled
/// for Stable, hollow otherwise. Points closer than one pixel to the
/// previous drawn point are dropped.
std::string phase_portrait_svg(const Trajectory& tr, const EquilibriumReport& report, const std::string& title);

/// Threshold positions drawn as labelled vertical lines on a bifurcation plot.
struct Marker {
  double x = 0.0;
  std::string label;
};

/// v-extrema of the attractor against the swept parameter (one point for an
/// equilibrium, two for a cycle) over the v+ branch, solid where E+ is Stable
/// and dashed elsewhere.
std::string bifurcation_svg(const std::vector<SweepRow>& rows, SweepParameter parameter,
                            const std::vector<Marker>& markers, const std::string& title);

}  // namespace coop
