#include "icorr/stencil.hpp"

namespace icorr {

BigReal default_stencil_step() {
  return pow10(-WorkingPrecision::digits() / 5);
}

BigReal central_derivative(const RealFn& f, const BigReal& t, int order,
                           const BigReal& h) {
  if (order != 1 && order != 2)
    throw DomainError("central_derivative: order must be 1 or 2");
  BigReal step = h.sign() > 0 ? h : default_stencil_step();
  BigReal f1p = f(t + step), f1m = f(t - step);
  BigReal f2p = f(t + 2 * step), f2m = f(t - 2 * step);
  if (order == 1) {
    // (-f2p + 8 f1p - 8 f1m + f2m) / (12 h)
    return (8 * (f1p - f1m) - (f2p - f2m)) / (12 * step);
  }
  BigReal f0 = f(t);
  // (-f2p + 16 f1p - 30 f0 + 16 f1m - f2m) / (12 h^2)
  return (16 * (f1p + f1m) - (f2p + f2m) - 30 * f0) / (12 * step * step);
}

StencilPair central_derivative_pair(const RealFn& f, const BigReal& t,
                                    const BigReal& h) {
  BigReal step = h.sign() > 0 ? h : default_stencil_step();
  BigReal f0 = f(t);
  BigReal f1p = f(t + step), f1m = f(t - step);
  BigReal f2p = f(t + 2 * step), f2m = f(t - 2 * step);
  StencilPair out;
  out.d1 = (8 * (f1p - f1m) - (f2p - f2m)) / (12 * step);
  out.d2 = (16 * (f1p + f1m) - (f2p + f2m) - 30 * f0) / (12 * step * step);
  return out;
}

}  // namespace icorr
