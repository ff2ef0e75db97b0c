#pragma once

#include <functional>

#include "icorr/bigreal.hpp"

namespace icorr {

using RealFn = std::function<BigReal(const BigReal&)>;

/// Step used by default for differencing: 10^(-P/5) at P working digits,
/// balancing O(h^4) truncation against cancellation in the extended mantissa.
BigReal default_stencil_step();

/// 4th-order central difference, order 1 or 2, of f at t with step h
/// (h <= 0 selects the default step). Five evaluations at t, t±h, t±2h.
BigReal central_derivative(const RealFn& f, const BigReal& t, int order,
                           const BigReal& h = BigReal(0));

/// First and second derivative from one shared stencil (saves evaluations).
struct StencilPair {
  BigReal d1;
  BigReal d2;
};
StencilPair central_derivative_pair(const RealFn& f, const BigReal& t,
                                    const BigReal& h = BigReal(0));

}  // namespace icorr
