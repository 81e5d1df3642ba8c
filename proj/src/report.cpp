#include "coop/report.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "coop/errors.hpp"

namespace coop {

const EquilibriumEntry* EquilibriumReport::find(EquilibriumKind kind) const {
  auto it = std::find_if(equilibria.begin(), equilibria.end(),
                         [kind](const EquilibriumEntry& e) { return e.kind == kind; });
  return it == equilibria.end() ? nullptr : &*it;
}

EquilibriumEntry* EquilibriumReport::find(EquilibriumKind kind) {
  return const_cast<EquilibriumEntry*>(std::as_const(*this).find(kind));
}

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::Trivial: return "E0";
    case EquilibriumKind::PredatorFree: return "E1";
    case EquilibriumKind::PositivePlus: return "E+";
    case EquilibriumKind::PositiveMinus: return "E-";
  }
  return "?";
}

std::string_view to_string(ExistenceClass cls) {
  switch (cls) {
    case ExistenceClass::UniquePositive: return "UniquePositive";
    case ExistenceClass::TwoPositive: return "TwoPositive";
    case ExistenceClass::NonePositive: return "NonePositive";
    case ExistenceClass::DegenerateDouble: return "DegenerateDouble";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::HopfCritical: return "HopfCritical";
    case Verdict::UnclassifiedByPaper: return "UnclassifiedByPaper";
  }
  return "?";
}

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const Enum (&values)[N], const char* what) {
  for (Enum e : values)
    if (to_string(e) == name) return e;
  throw InvalidParameter(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

}  // namespace

EquilibriumKind parse_equilibrium_kind(std::string_view name) {
  static constexpr EquilibriumKind all[] = {EquilibriumKind::Trivial, EquilibriumKind::PredatorFree,
                                            EquilibriumKind::PositivePlus,
                                            EquilibriumKind::PositiveMinus};
  return parse_enum(name, all, "equilibrium kind");
}

ExistenceClass parse_existence_class(std::string_view name) {
  static constexpr ExistenceClass all[] = {ExistenceClass::UniquePositive, ExistenceClass::TwoPositive,
                                           ExistenceClass::NonePositive,
                                           ExistenceClass::DegenerateDouble};
  return parse_enum(name, all, "existence class");
}

Verdict parse_verdict(std::string_view name) {
  static constexpr Verdict all[] = {Verdict::Stable, Verdict::Unstable, Verdict::HopfCritical,
                                    Verdict::UnclassifiedByPaper};
  return parse_enum(name, all, "verdict");
}

}  // namespace coop
