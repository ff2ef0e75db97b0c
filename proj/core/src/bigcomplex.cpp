#include "icorr/bigcomplex.hpp"

#include <algorithm>

namespace icorr {

BigComplex::BigComplex(BigReal real, BigReal imag) {
  mpfr_prec_t p = std::min(real.precision_bits(), imag.precision_bits());
  if (real.precision_bits() != p) {
    re_ = make_with_bits(p);
    mpfr_set(re_.raw(), real.raw(), MPFR_RNDN);
  } else {
    re_ = std::move(real);
  }
  if (imag.precision_bits() != p) {
    im_ = make_with_bits(p);
    mpfr_set(im_.raw(), imag.raw(), MPFR_RNDN);
  } else {
    im_ = std::move(imag);
  }
}

BigComplex BigComplex::i_unit() { return BigComplex(BigReal(0), BigReal(1)); }

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  BigReal d = b.abs2();
  if (d.is_zero()) throw DomainError("complex division by zero");
  return BigComplex((a.re() * b.re() + a.im() * b.im()) / d,
                    (a.im() * b.re() - a.re() * b.im()) / d);
}

std::string BigComplex::str(long digits) const {
  return "(" + re_.str(digits) + ", " + im_.str(digits) + ")";
}

BigComplex sqrt(const BigComplex& z) {
  // w = sqrt((|z|+|x|)/2); quadrant fixed by the signs of x, y.
  if (z.im().is_zero()) {
    BigReal zero = make_with_bits(z.precision_bits());
    if (z.re().sign() >= 0) return BigComplex(sqrt(z.re()), zero);
    return BigComplex(zero, sqrt(-z.re()));
  }
  BigReal r = z.abs();
  BigReal two = BigReal(2);
  if (z.re().sign() >= 0) {
    BigReal u = sqrt((r + z.re()) / two);
    return BigComplex(u, z.im() / (two * u));
  }
  BigReal v = sqrt((r - z.re()) / two);
  if (z.im().sign() < 0) v = -v;
  return BigComplex(z.im() / (two * v), v);
}

BigComplex pow(const BigComplex& z, long n) {
  if (n < 0) throw DomainError("pow(BigComplex, n): negative n unsupported");
  BigReal one = make_with_bits(z.precision_bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  BigComplex acc(one);
  BigComplex base = z;
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

}  // namespace icorr
