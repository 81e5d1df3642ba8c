#include "coop/hopf.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "coop/errors.hpp"
#include "coop/stability.hpp"

namespace coop {

namespace {

using cd = std::complex<double>;
using CVec = std::array<cd, 2>;
using Hessians = std::array<Matrix2, 2>;                          // [component][j][k]
using ThirdPartials = std::array<std::array<Matrix2, 2>, 2>;     // [component][j][k][l]

double check_assumptions_and_band(const ScaledParams& prm, const Tolerances& tol) {
  validate(prm);
  if (!hopf_assumptions_hold(prm, tol))
    throw AssumptionViolated("Hopf analysis needs p > 1, or p <= 1 with b > b_threshold(p)");
  const double qh = qh_threshold(prm);
  if (std::abs(prm.q - qh) > tol.hopf * std::max(1.0, qh))
    throw NotAtHopf("q is outside the HopfCritical band around q_h");
  return qh;
}

/// s+ of f at q = q_h.
double plus_root_at(const ScaledParams& prm, double qh, const Tolerances& tol) {
  const RootClassification rc = classify_roots({prm.b, prm.p, qh}, tol);
  if (rc.roots.empty()) throw AssumptionViolated("no positive equilibrium at q_h");
  return rc.roots.back();
}

cd dot(const CVec& a, const CVec& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

CVec bilinear(const Hessians& H, const CVec& x, const CVec& y) {
  CVec out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out[i] += H[i][j][k] * x[j] * y[k];
  return out;
}

CVec trilinear(const ThirdPartials& T, const CVec& x, const CVec& y, const CVec& z) {
  CVec out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out[i] += T[i][j][k][l] * x[j] * y[k] * z[l];
  return out;
}

/// Solves M x = r for a complex 2x2 M.
CVec solve(const std::array<CVec, 2>& M, const CVec& r) {
  const cd det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
  return {(r[0] * M[1][1] - M[0][1] * r[1]) / det, (M[0][0] * r[1] - r[0] * M[1][0]) / det};
}

Hessians analytic_hessians(const ScaledParams& prm, State e) {
  const double cross = prm.p + 2.0 * prm.q * e.v;
  const double vv = 2.0 * prm.q * e.u;
  Hessians H{};
  H[0] = Matrix2{{{-2.0 * prm.b, -cross}, {-cross, -vv}}};
  H[1] = Matrix2{{{0.0, cross}, {cross, vv}}};
  return H;
}

ThirdPartials analytic_third(const ScaledParams& prm) {
  // Only d^3/du dv dv (and permutations) is nonzero: -2q for u', +2q for v'.
  ThirdPartials T{};
  for (int i = 0; i < 2; ++i) {
    const double c = i == 0 ? -2.0 * prm.q : 2.0 * prm.q;
    T[i][0][1][1] = T[i][1][0][1] = T[i][1][1][0] = c;
  }
  return T;
}

std::array<double, 2> field(const ScaledParams& prm, double u, double v) {
  const Rates r = vector_field(prm, {u, v});
  return {r.du, r.dv};
}

Hessians fd_hessians(const ScaledParams& prm, State e, double h) {
  Hessians H{};
  const double x[2] = {e.u, e.v};
  for (int j = 0; j < 2; ++j) {
    for (int k = j; k < 2; ++k) {
      auto at = [&](double dj, double dk) {
        double y[2] = {x[0], x[1]};
        y[j] += dj;
        y[k] += dk;
        return field(prm, y[0], y[1]);
      };
      std::array<double, 2> value{};
      if (j == k) {
        const auto fp = at(h, 0.0), fm = at(-h, 0.0), f0 = field(prm, x[0], x[1]);
        for (int i = 0; i < 2; ++i) value[i] = (fp[i] - 2.0 * f0[i] + fm[i]) / (h * h);
      } else {
        const auto pp = at(h, h), pm = at(h, -h), mp = at(-h, h), mm = at(-h, -h);
        for (int i = 0; i < 2; ++i) value[i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h);
      }
      for (int i = 0; i < 2; ++i) H[i][j][k] = H[i][k][j] = value[i];
    }
  }
  return H;
}

ThirdPartials fd_third(const ScaledParams& prm, State e, double h) {
  ThirdPartials T{};
  for (int l = 0; l < 2; ++l) {
    State plus = e, minus = e;
    (l == 0 ? plus.u : plus.v) += h;
    (l == 0 ? minus.u : minus.v) -= h;
    const Hessians hp = fd_hessians(prm, plus, h), hm = fd_hessians(prm, minus, h);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) T[i][j][k][l] = (hp[i][j][k] - hm[i][j][k]) / (2.0 * h);
  }
  return T;
}

}  // namespace

bool hopf_assumptions_hold(const ScaledParams& prm, const Tolerances& tol) {
  if (prm.p > 1.0) return true;
  const double bt = b_threshold(prm.p);
  return prm.b > bt && std::abs(prm.b - bt) > tol.classification * std::max(1.0, bt);
}

HopfData hopf_data(const ScaledParams& prm, const Tolerances& tol) {
  const double qh = check_assumptions_and_band(prm, tol);
  const double s = plus_root_at(prm, qh, tol);
  const ScaledParams at{prm.b, prm.p, qh};
  const CubicF f = CubicF::from(at);

  const double u = 1.0 / s;
  const double v = prm.b * (s - 1.0) / (s * s);
  const double z = prm.b * u;
  const double w2 = u * v * f.derivative(s);
  if (!(w2 > 0.0)) throw AssumptionViolated("det(J+) is not positive at q_h");
  const double w = std::sqrt(w2);
  const double z2 = z * z;
  const cd i{0.0, 1.0};
  const cd denom = 2.0 * i * w * (w2 + z2);

  HopfData d;
  d.qh = qh;
  d.s = s;
  d.z = z;
  d.w = w;
  const cd half_g20 = s *
                      (z2 * z2 * (z + 2.0) + w2 * (3.0 * z2 + 2.0 * z) - w2 * w2 * (z + 1.0) +
                       i * w * (-z2 + w2 + 2.0 * z * w2)) /
                      denom;
  d.g20 = 2.0 * half_g20;
  d.g11 = s * z * (z2 + 2.0 * z - i * w) / (i * w);
  const cd half_g21 = s * s * z * (z + 1.0) *
                      (-3.0 * z2 + w2 * (2.0 * z - 1.0) - i * w * (3.0 * z2 + 2.0 * z + w2)) / denom;
  d.g21 = 2.0 * half_g21;
  d.l1 = -s * s * z2 * (z + 1.0) * (z + 2.0) / w;
  d.l1_expansion = (i * d.g20 * d.g11 + w * d.g21).real();
  return d;
}

double lyapunov_oracle(const ScaledParams& prm, std::optional<double> fd_step, const Tolerances& tol) {
  const double qh = check_assumptions_and_band(prm, tol);
  const ScaledParams at{prm.b, prm.p, qh};
  const double s = plus_root_at(prm, qh, tol);
  const State e{1.0 / s, prm.b * (s - 1.0) / (s * s)};

  const Matrix2 J = jacobian(at, e);
  const double det = determinant(J);
  if (!(det > 0.0)) throw AssumptionViolated("det(J+) is not positive at q_h");
  const double w = std::sqrt(det);
  const cd i{0.0, 1.0};

  // J q = iw q with q = (-J12, J11 - iw); J^T p = -iw p, scaled so <p, q> = 1.
  const CVec q{cd{-J[0][1], 0.0}, J[0][0] - i * w};
  CVec p{cd{J[1][0], 0.0}, -(J[0][0] + i * w)};
  const cd scale = std::conj(1.0 / dot(p, q));
  p = {p[0] * scale, p[1] * scale};
  const CVec qbar{std::conj(q[0]), std::conj(q[1])};

  Hessians H;
  ThirdPartials T;
  if (fd_step) {
    if (!(*fd_step > 0.0)) throw InvalidParameter("finite-difference step must be > 0");
    H = fd_hessians(at, e, *fd_step);
    T = fd_third(at, e, *fd_step);
  } else {
    H = analytic_hessians(at, e);
    T = analytic_third(at);
  }

  const std::array<CVec, 2> A{CVec{J[0][0], J[0][1]}, CVec{J[1][0], J[1][1]}};
  const std::array<CVec, 2> shifted{CVec{2.0 * i * w - J[0][0], -J[0][1]},
                                    CVec{-J[1][0], 2.0 * i * w - J[1][1]}};
  const cd c3 = dot(p, trilinear(T, q, q, qbar));
  const cd c2a = dot(p, bilinear(H, q, solve(A, bilinear(H, q, qbar))));
  const cd c2b = dot(p, bilinear(H, qbar, solve(shifted, bilinear(H, q, q))));
  const double kuznetsov = (c3 - 2.0 * c2a + c2b).real() / (2.0 * w);
  // Kuznetsov's l1 carries an extra 1/(2 w^2) relative to Re(i g20 g11 + w g21).
  return 2.0 * w * w * kuznetsov;
}

std::optional<HopfData> find_hopf_in_q(double b, double p, const Tolerances& tol) {
  const ScaledParams base{b, p, 0.0};
  validate(base);
  if (!(p + b > 1.0) || !hopf_assumptions_hold(base, tol)) return std::nullopt;
  const double qh = qh_threshold(base);
  return hopf_data({b, p, qh}, tol);
}

}  // namespace coop
