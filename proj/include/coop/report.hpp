#pragma once

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coop/model.hpp"

namespace coop {

enum class EquilibriumKind { Trivial, PredatorFree, PositivePlus, PositiveMinus };

/// Number and nature of the positive equilibria for a parameter set.
enum class ExistenceClass { UniquePositive, TwoPositive, NonePositive, DegenerateDouble };

enum class Verdict { Stable, Unstable, HopfCritical, UnclassifiedByPaper };

struct StabilityVerdict {
  Verdict tag = Verdict::UnclassifiedByPaper;
  /// Which inequality decided the verdict, e.g. "tr(J+)>0".
  std::string witness;

  bool operator==(const StabilityVerdict&) const = default;
};

struct EquilibriumEntry {
  EquilibriumKind kind = EquilibriumKind::Trivial;
  State point;
  /// 1/u for positive equilibria.
  std::optional<double> s;
  double trace = std::numeric_limits<double>::quiet_NaN();
  double determinant = std::numeric_limits<double>::quiet_NaN();
  std::array<std::complex<double>, 2> eigenvalues{};
  std::optional<StabilityVerdict> verdict;

  bool operator==(const EquilibriumEntry&) const = default;
};

struct EquilibriumReport {
  ScaledParams params;
  ExistenceClass existence = ExistenceClass::NonePositive;
  /// Roots of f greater than 1, ascending. A DegenerateDouble root appears once.
  std::vector<double> roots;
  std::vector<EquilibriumEntry> equilibria;
  std::optional<double> q0;           ///< present when p <= 1
  std::optional<double> qh;           ///< present when p + b > 1
  std::optional<double> b_threshold;  ///< present when p <= 1

  const EquilibriumEntry* find(EquilibriumKind kind) const;
  EquilibriumEntry* find(EquilibriumKind kind);

  bool operator==(const EquilibriumReport&) const = default;
};

std::string_view to_string(EquilibriumKind kind);
std::string_view to_string(ExistenceClass cls);
std::string_view to_string(Verdict verdict);

/// Inverse of to_string; throws InvalidParameter on unknown names.
EquilibriumKind parse_equilibrium_kind(std::string_view name);
ExistenceClass parse_existence_class(std::string_view name);
Verdict parse_verdict(std::string_view name);

}  // namespace coop
