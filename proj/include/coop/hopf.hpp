#pragma once

#include <complex>
#include <optional>

#include "coop/equilibria.hpp"
#include "coop/model.hpp"

namespace coop {

/// Normal-form data of the Hopf point q = q_h.
///
/// With s = 1/u+ and z = b u+, the linearization at E+ has eigenvalues
/// +-iw, and in the complex coordinate alpha of the eigenbasis
/// columns (1+z, -z-iw) the flow reads
///
///   alpha' = iw alpha + g20/2 alpha^2 + g11 alpha conj(alpha) + g21/2 alpha^2 conj(alpha) + ...
///
/// The first Lyapunov coefficient is normalized as l1 = Re(i g20 g11 + w g21).
struct HopfData {
  double qh = 0.0;
  double s = 0.0;
  double z = 0.0;
  double w = 0.0;
  std::complex<double> g20;
  std::complex<double> g11;
  std::complex<double> g21;
  /// Closed form -s^2 z^2 (z+1)(z+2) / w.
  double l1 = 0.0;
  /// Re(i g20 g11 + w g21) from the coefficients above.
  double l1_expansion = 0.0;

  bool operator==(const HopfData&) const = default;
};

/// True when p > 1, or p <= 1 with b strictly above b_threshold(p) (outside
/// the classification band). These are the cases where E+ switches stability
/// at q_h.
bool hopf_assumptions_hold(const ScaledParams& params, const Tolerances& tol = {});

/// Requires q within the HopfCritical band around q_h; s is re-solved at
/// q = q_h exactly. Throws AssumptionViolated or NotAtHopf.
HopfData hopf_data(const ScaledParams& params_at_qh, const Tolerances& tol = {});

/// Independent first Lyapunov coefficient from the invariant projection
/// formula built on second and third partial derivatives of the vector field
/// at E+, using the same eigenbasis normalization as HopfData (so the result
/// is directly comparable to HopfData::l1). Analytic partials by default;
/// pass a step to use central finite differences instead.
double lyapunov_oracle(const ScaledParams& params_at_qh, std::optional<double> fd_step = std::nullopt,
                       const Tolerances& tol = {});

/// q_h and its HopfData for fixed (b, p), or nothing when p + b <= 1 or the
/// stability switch does not occur.
std::optional<HopfData> find_hopf_in_q(double b, double p, const Tolerances& tol = {});

}  // namespace coop
