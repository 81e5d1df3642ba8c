#include "coop/stability.hpp"

#include <algorithm>
#include <cmath>

#include "coop/errors.hpp"

namespace coop {

namespace {

bool within_band(double x, double threshold, double band) {
  return std::abs(x - threshold) <= band * std::max(1.0, std::abs(threshold));
}

StabilityVerdict verdict(Verdict tag, std::string witness) {
  return StabilityVerdict{tag, std::move(witness)};
}

void fill_linearization(const ScaledParams& prm, EquilibriumEntry& e) {
  const Matrix2 J = jacobian(prm, e.point);
  e.trace = trace(J);
  e.determinant = determinant(J);
  e.eigenvalues = eigenvalues_from(e.trace, e.determinant);
}

StabilityVerdict plus_against_qh(const ScaledParams& prm, const Tolerances& tol) {
  const double qh = qh_threshold(prm);
  if (within_band(prm.q, qh, tol.hopf))
    return verdict(Verdict::HopfCritical, "q=q_h: tr(J+)=0 and det(J+)>0");
  if (prm.q < qh) return verdict(Verdict::Stable, "q<q_h: tr(J+)<0 and det(J+)>0");
  return verdict(Verdict::Unstable, "q>q_h: tr(J+)>0");
}

}  // namespace

double qh_threshold(const ScaledParams& prm) {
  const double sum = prm.p + prm.b;
  if (!(sum > 1.0)) throw UndefinedThreshold("q_h is only defined for p + b > 1");
  return sum * sum / (sum - 1.0);
}

double b_threshold(double p) {
  if (p > 1.0) throw UndefinedThreshold("b threshold is only defined for p <= 1");
  return (3.0 * (1.0 - p) + std::sqrt((1.0 - p) * (9.0 - p))) / 4.0;
}

std::array<std::complex<double>, 2> eigenvalues_from(double tr, double det) {
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>{0.5 * tr, im}, std::complex<double>{0.5 * tr, -im}};
  }
  // Larger-magnitude root first, the other from the product to avoid cancellation.
  const double big = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
  const double small = big != 0.0 ? det / big : 0.0;
  const double hi = std::max(big, small), lo = std::min(big, small);
  return {std::complex<double>{hi, 0.0}, std::complex<double>{lo, 0.0}};
}

BoundaryVerdicts classify_boundary(const ScaledParams& prm, const Tolerances& tol) {
  validate(prm);
  BoundaryVerdicts out;
  out.e0 = verdict(Verdict::Unstable, "J0 has eigenvalue b>0");
  if (prm.p < 1.0) {
    out.e1 = verdict(Verdict::Stable, "p<1: J1 eigenvalues -b<0 and p-1<0");
  } else if (prm.p > 1.0) {
    out.e1 = verdict(Verdict::Unstable, "p>1: J1 eigenvalue p-1>0");
  } else {
    const double critical = 1.0 / prm.b;
    if (within_band(prm.q, critical, tol.classification))
      out.e1 = verdict(Verdict::Stable,
                       "p=1 and q=1/b: critically stable (center manifold, y'=-2q^2y^3)");
    else if (prm.q < critical)
      out.e1 = verdict(Verdict::Stable, "p=1 and q<1/b: center manifold y'=(q-1/b)y^2");
    else
      out.e1 = verdict(Verdict::Unstable, "p=1 and q>1/b: center manifold y'=(q-1/b)y^2");
  }
  return out;
}

void classify_positive(const ScaledParams& prm, EquilibriumReport& report, const Tolerances& tol) {
  validate(prm);
  for (EquilibriumEntry& e : report.equilibria) {
    if (e.kind == EquilibriumKind::PositiveMinus) {
      fill_linearization(prm, e);
      e.verdict = verdict(Verdict::Unstable, "det(J-)<0");
    } else if (e.kind == EquilibriumKind::PositivePlus) {
      fill_linearization(prm, e);
      if (report.existence == ExistenceClass::DegenerateDouble) {
        e.verdict = verdict(Verdict::UnclassifiedByPaper, "q=q0: double root, E+=E- not analyzed");
      } else if (prm.p > 1.0) {
        e.verdict = plus_against_qh(prm, tol);
      } else {
        const double bt = b_threshold(prm.p);
        if (within_band(prm.b, bt, tol.classification))
          e.verdict = verdict(Verdict::UnclassifiedByPaper, "b=b_threshold: boundary not covered");
        else if (prm.b < bt)
          e.verdict = verdict(Verdict::Unstable, "b<b_threshold: tr(J+)>0");
        else
          e.verdict = plus_against_qh(prm, tol);
      }
    }
  }
}

EquilibriumReport analyze(const ScaledParams& prm, const Tolerances& tol) {
  EquilibriumReport report = equilibria_for(prm, tol);
  if (prm.p + prm.b > 1.0) report.qh = qh_threshold(prm);
  if (prm.p <= 1.0) report.b_threshold = b_threshold(prm.p);

  const BoundaryVerdicts bv = classify_boundary(prm, tol);
  for (EquilibriumEntry& e : report.equilibria) {
    if (e.kind == EquilibriumKind::Trivial) {
      fill_linearization(prm, e);
      e.verdict = bv.e0;
    } else if (e.kind == EquilibriumKind::PredatorFree) {
      fill_linearization(prm, e);
      e.verdict = bv.e1;
    }
  }
  classify_positive(prm, report, tol);
  return report;
}

NonScaledReport classify_nonscaled(const RawParams& raw, const Tolerances& tol) {
  NonScaledReport out;
  out.raw = raw;
  out.scaled = nondimensionalize(raw);
  out.scaled_report = analyze(out.scaled, tol);

  for (const EquilibriumEntry& e : out.scaled_report.equilibria) {
    RawEquilibrium r;
    r.kind = e.kind;
    r.point = to_raw(raw, e.point);
    // t = D T, so d/dT = D d/dt.
    r.eigenvalues = {e.eigenvalues[0] * raw.D, e.eigenvalues[1] * raw.D};
    r.verdict = e.verdict;
    out.equilibria.push_back(r);
  }

  const double cpk = raw.C * raw.P * raw.K;
  const double D = raw.D;
  NonScaledThresholds& t = out.thresholds;
  t.r0 = cpk / D;
  t.cooperation = raw.C * raw.C * raw.Q * raw.K * raw.K;
  if (cpk + raw.B > D) t.hopf_bound = (cpk + raw.B) * (cpk + raw.B) / (cpk + raw.B - D);
  t.existence_lhs = 8.0 * raw.B * t.cooperation;
  t.birth_lhs = 4.0 * raw.B;
  if (cpk <= D) {
    const double root = std::sqrt((D - cpk) * (9.0 * D - cpk));
    t.existence_bound = (9.0 * D - cpk) * root + 27.0 * D * D - 18.0 * D * cpk - cpk * cpk;
    t.birth_bound = 3.0 * (D - cpk) + root;
  }
  t.critical_lhs = raw.B * t.cooperation;
  t.critical_bound = D * D;
  return out;
}

}  // namespace coop
