#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "icorr/bigcomplex.hpp"

namespace icorr {

/// M-point trapezoidal rule on the circle |z| = rho for integrals of the form
/// ∮ f(z) dz/(2π). Node m sits at rho·e^{iθ_m}, θ_m = 2πm/M; its weight is
/// i·z_m/M (the dz = iz dθ Jacobian folded with the 1/(2π) normalization), so
/// Σ_m w_m / z_m = i exactly — the residue check.
struct CircleQuadrature {
  BigReal radius;
  long points = 0;
  std::vector<BigComplex> nodes;
  std::vector<BigComplex> weights;

  static CircleQuadrature make(const BigReal& rho, long M);

  /// Σ w/z; equals i to working precision for any (rho, M).
  BigComplex residue_check() const;
};

using CIntegrand = std::function<BigComplex(const BigComplex&)>;

/// Σ_m w_m f(z_m). Throws NodeSingularity if f is non-finite at a node.
BigComplex quad_circle(const CIntegrand& f, const CircleQuadrature& q);

/// Doubles M from m0 until two successive values differ by < tol in absolute
/// value; returns (value, M actually used). Throws NoConvergence past the cap.
std::pair<BigComplex, long> adaptive_circle(const CIntegrand& f, const BigReal& rho,
                                            const BigReal& tol, long m0 = 64,
                                            long cap = 1L << 16);

}  // namespace icorr
