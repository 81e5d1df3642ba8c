#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coop/simulate.hpp"
#include "coop/stability.hpp"
#include "oracles.hpp"

namespace coop::testing {

struct AgreementCase {
  ScaledParams params;
  EquilibriumKind kind;
  Verdict verdict;
  ProbeOutcome probe;
};

struct AgreementResult {
  int draws = 0;
  int probed = 0;
  int excluded = 0;
  std::vector<AgreementCase> mismatches;
};

/// Probes every equilibrium of `draws` random parameter sets with the default
/// radius. Equilibria without a Stable/Unstable verdict, or with
/// min |Re lambda| < 10 * radius, are in the non-hyperbolic band and skipped.
inline AgreementResult verdict_probe_agreement(std::uint64_t seed, int draws) {
  const ProbeOptions opt;
  std::mt19937_64 rng(seed);
  AgreementResult out;
  for (int k = 0; k < draws; ++k) {
    const ScaledParams prm{draw(rng, 0, 5), draw(rng, 0, 3), draw(rng, 0, 10)};
    ++out.draws;
    for (const auto& e : analyze(prm).equilibria) {
      const Verdict tag = e.verdict->tag;
      const double slow = std::min(std::abs(e.eigenvalues[0].real()), std::abs(e.eigenvalues[1].real()));
      if ((tag != Verdict::Stable && tag != Verdict::Unstable) || slow < 10.0 * opt.radius) {
        ++out.excluded;
        continue;
      }
      ++out.probed;
      const ProbeResult r = stability_probe(prm, e.point, opt);
      const bool agrees = tag == Verdict::Stable ? r.outcome == ProbeOutcome::Converges
                                                 : r.outcome == ProbeOutcome::Escapes;
      if (!agrees) out.mismatches.push_back({prm, e.kind, tag, r.outcome});
    }
  }
  return out;
}

}  // namespace coop::testing
