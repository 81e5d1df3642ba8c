#pragma once

// Test-only oracles. Nothing here calls into the code paths it is used to
// check: roots come from companion-matrix eigenvalues and sign-change
// bisection, never from the closed-form cubic solver.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "coop/model.hpp"
#include "coop/stability.hpp"

namespace coop::testing {

inline double cubic_f(double p, double qb, double s) { return s * s * s - p * s * s - qb * (s - 1.0); }

/// Bisection to machine precision on a sign-change bracket.
inline double bisect(double p, double qb, double lo, double hi) {
  double flo = cubic_f(p, qb, lo);
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = cubic_f(p, qb, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Real roots of f(s) = s^3 - p s^2 - qb s + qb greater than 1, from the
/// eigenvalues of the companion matrix, each refined by bisection when a
/// sign change brackets it.
inline std::vector<double> companion_roots_above_one(double p, double qb) {
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  // Companion of s^3 + a2 s^2 + a1 s + a0.
  const double a2 = -p, a1 = -qb, a0 = qb;
  M(0, 2) = -a0;
  M(1, 2) = -a1;
  M(2, 2) = -a2;
  M(1, 0) = 1.0;
  M(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(M, false);
  std::vector<double> out;
  const double scale = 1.0 + std::abs(p) + std::abs(qb);
  for (int i = 0; i < 3; ++i) {
    const auto lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) > 1e-7 * scale) continue;
    double s = lam.real();
    const double d = 1e-6 * std::max(1.0, std::abs(s));
    if (cubic_f(p, qb, s - d) * cubic_f(p, qb, s + d) < 0.0) s = bisect(p, qb, s - d, s + d);
    if (s > 1.0) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Classic interior-grid sign-change scan of f on (1, smax], bisected.
inline std::vector<double> scan_roots_above_one(double p, double qb, int cells = 200000) {
  const double smax = 1.0 + std::max({1.0, p, qb});  // Cauchy bound
  std::vector<double> out;
  double prev_s = 1.0;
  double prev_f = cubic_f(p, qb, prev_s);
  for (int k = 1; k <= cells; ++k) {
    const double s = 1.0 + (smax - 1.0) * k / cells;
    const double fs = cubic_f(p, qb, s);
    if (fs == 0.0 || (prev_f != 0.0 && (fs > 0.0) != (prev_f > 0.0)))
      out.push_back(fs == 0.0 ? s : bisect(p, qb, prev_s, s));
    prev_s = s;
    prev_f = fs;
  }
  return out;
}

/// Uniform draw on (lo, hi].
inline double draw(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  double x = d(rng);
  return x == lo ? hi : x;
}

/// A random (b, p) admitting a stability switch, at q = q_h. b comes from
/// (0, 5], p from (0, 3], staying 5% clear of b_threshold when p <= 1.
inline ScaledParams random_hopf_point(std::mt19937_64& rng) {
  for (;;) {
    const double b = draw(rng, 0, 5), p = draw(rng, 0, 3);
    if (p <= 1.0 && b <= 1.05 * b_threshold(p)) continue;
    return {b, p, qh_threshold({b, p, 0.0})};
  }
}

}  // namespace coop::testing
