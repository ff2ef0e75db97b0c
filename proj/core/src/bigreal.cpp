#include "icorr/bigreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace icorr {

namespace {
thread_local long tl_digits = 50;

mpfr_prec_t min_prec(const BigReal& a, const BigReal& b) {
  return std::min(a.precision_bits(), b.precision_bits());
}
}  // namespace

long WorkingPrecision::digits() { return tl_digits; }

void WorkingPrecision::set_digits(long d) {
  if (d < 30) throw DomainError("working precision below 30 digits");
  tl_digits = d;
}

mpfr_prec_t WorkingPrecision::bits_for(long digits) {
  // log2(10) = 3.3219...; a few guard bits so the last decimal digit is honest.
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

long WorkingPrecision::digits_for(mpfr_prec_t bits) {
  return static_cast<long>((bits - 16) / 3.3219280948873623);
}

mpfr_prec_t WorkingPrecision::bits() { return bits_for(tl_digits); }

BigReal::BigReal() { mpfr_init2(v_, WorkingPrecision::bits()); mpfr_set_zero(v_, 1); }

BigReal::BigReal(long v) {
  mpfr_init2(v_, WorkingPrecision::bits());
  mpfr_set_si(v_, v, MPFR_RNDN);
}

BigReal::BigReal(double v) {
  mpfr_init2(v_, WorkingPrecision::bits());
  mpfr_set_d(v_, v, MPFR_RNDN);
  check_finite("double ctor");
}

BigReal::BigReal(const char* decimal) : BigReal(std::string(decimal)) {}

BigReal::BigReal(const std::string& decimal, long digits) {
  mpfr_init2(v_, digits > 0 ? WorkingPrecision::bits_for(digits) : WorkingPrecision::bits());
  if (mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(v_);
    throw DomainError("unparseable decimal literal: " + decimal);
  }
  check_finite("string ctor");
}

BigReal::BigReal(mpfr_prec_t bits, int) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }

BigReal::BigReal(const BigReal& o) {
  mpfr_init2(v_, o.precision_bits());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& o) noexcept {
  v_[0] = o.v_[0];
  mpfr_init2(o.v_, MPFR_PREC_MIN);  // leave the source valid for its dtor
}

BigReal& BigReal::operator=(const BigReal& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.precision_bits());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
  if (this != &o) mpfr_swap(v_, o.v_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

BigReal make_with_bits(mpfr_prec_t bits) { return BigReal(bits, 0); }

BigReal widen(const BigReal& x, long digits) {
  BigReal r = BigReal::with_digits(digits);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal BigReal::with_digits(long digits) {
  return BigReal(WorkingPrecision::bits_for(digits), 0);
}

BigReal BigReal::ratio(long num, long den, long digits) {
  if (den == 0) throw DomainError("ratio with zero denominator");
  BigReal r = digits > 0 ? with_digits(digits) : BigReal();
  mpfr_set_si(r.v_, num, MPFR_RNDN);
  mpfr_div_si(r.v_, r.v_, den, MPFR_RNDN);
  return r;
}

long BigReal::precision_digits() const {
  return WorkingPrecision::digits_for(precision_bits());
}

void BigReal::check_finite(const char* op) const {
  if (!is_finite()) throw NonFiniteError(std::string("non-finite result in ") + op);
}

BigReal BigReal::operator-() const {
  BigReal r(precision_bits(), 0);
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

#define ICORR_BINOP(name, fn)                              \
  BigReal operator name(const BigReal& a, const BigReal& b) { \
    BigReal r(min_prec(a, b), 0);                          \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                       \
    r.check_finite(#name);                                 \
    return r;                                              \
  }

ICORR_BINOP(+, mpfr_add)
ICORR_BINOP(-, mpfr_sub)
ICORR_BINOP(*, mpfr_mul)
ICORR_BINOP(/, mpfr_div)
#undef ICORR_BINOP

#define ICORR_BINOP_SI(name, fn)                        \
  BigReal operator name(const BigReal& a, long b) {     \
    BigReal r(a.precision_bits(), 0);                   \
    fn(r.v_, a.v_, b, MPFR_RNDN);                       \
    r.check_finite(#name);                              \
    return r;                                           \
  }

ICORR_BINOP_SI(+, mpfr_add_si)
ICORR_BINOP_SI(-, mpfr_sub_si)
ICORR_BINOP_SI(*, mpfr_mul_si)
ICORR_BINOP_SI(/, mpfr_div_si)
#undef ICORR_BINOP_SI

BigReal operator-(long a, const BigReal& b) {
  BigReal r(b.precision_bits(), 0);
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator/(long a, const BigReal& b) {
  BigReal r(b.precision_bits(), 0);
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  r.check_finite("/");
  return r;
}

BigReal& BigReal::operator+=(const BigReal& o) { return *this = *this + o; }
BigReal& BigReal::operator-=(const BigReal& o) { return *this = *this - o; }
BigReal& BigReal::operator*=(const BigReal& o) { return *this = *this * o; }
BigReal& BigReal::operator/=(const BigReal& o) { return *this = *this / o; }

std::string BigReal::str(long digits) const {
  if (!is_finite()) return is_nan() ? "nan" : (sign() > 0 ? "inf" : "-inf");
  long d = digits > 0 ? digits : precision_digits();
  char fmt[32];
  std::snprintf(fmt, sizeof fmt, "%%.%ldRg", d);
  std::vector<char> buf(static_cast<size_t>(d) + 64);
  mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
  return std::string(buf.data());
}

#define ICORR_FN1(cname, fn)                  \
  BigReal cname(const BigReal& x) {           \
    BigReal r = make_with_bits(x.precision_bits()); \
    fn(r.raw(), x.raw(), MPFR_RNDN);          \
    if (!r.is_finite()) throw NonFiniteError("non-finite result in " #cname); \
    return r;                                 \
  }

ICORR_FN1(abs, mpfr_abs)
ICORR_FN1(cbrt, mpfr_cbrt)
ICORR_FN1(exp, mpfr_exp)
ICORR_FN1(expm1, mpfr_expm1)
ICORR_FN1(log1p, mpfr_log1p)
ICORR_FN1(sin, mpfr_sin)
ICORR_FN1(cos, mpfr_cos)
ICORR_FN1(tan, mpfr_tan)
ICORR_FN1(atan, mpfr_atan)
ICORR_FN1(sinh, mpfr_sinh)
ICORR_FN1(cosh, mpfr_cosh)
#undef ICORR_FN1

BigReal floor(const BigReal& x) {
  BigReal r = make_with_bits(x.precision_bits());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

BigReal sqrt(const BigReal& x) {
  if (x.sign() < 0) throw DomainError("sqrt of negative value");
  BigReal r = make_with_bits(x.precision_bits());
  mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("log of non-positive value");
  BigReal r = make_with_bits(x.precision_bits());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal asin(const BigReal& x) {
  if (abs(x) > BigReal(1)) throw DomainError("asin argument outside [-1,1]");
  BigReal r = make_with_bits(x.precision_bits());
  mpfr_asin(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal acos(const BigReal& x) {
  if (abs(x) > BigReal(1)) throw DomainError("acos argument outside [-1,1]");
  BigReal r = make_with_bits(x.precision_bits());
  mpfr_acos(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r = make_with_bits(std::min(x.precision_bits(), y.precision_bits()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigReal pow(const BigReal& base, const BigReal& e) {
  BigReal r = make_with_bits(std::min(base.precision_bits(), e.precision_bits()));
  mpfr_pow(r.raw(), base.raw(), e.raw(), MPFR_RNDN);
  if (!r.is_finite()) throw NonFiniteError("non-finite result in pow");
  return r;
}

BigReal pow(const BigReal& base, long e) {
  BigReal r = make_with_bits(base.precision_bits());
  mpfr_pow_si(r.raw(), base.raw(), e, MPFR_RNDN);
  if (!r.is_finite()) throw NonFiniteError("non-finite result in pow");
  return r;
}

BigReal hypot(const BigReal& x, const BigReal& y) {
  BigReal r = make_with_bits(std::min(x.precision_bits(), y.precision_bits()));
  mpfr_hypot(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

BigReal min(const BigReal& a, const BigReal& b) { return a <= b ? a : b; }
BigReal max(const BigReal& a, const BigReal& b) { return a >= b ? a : b; }

BigReal pi(long digits) {
  BigReal r = digits > 0 ? BigReal::with_digits(digits) : BigReal();
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

BigReal euler_gamma_const(long digits) {
  BigReal r = digits > 0 ? BigReal::with_digits(digits) : BigReal();
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

BigReal zeta_int(unsigned long n, long digits) {
  BigReal r = digits > 0 ? BigReal::with_digits(digits) : BigReal();
  mpfr_zeta_ui(r.raw(), n, MPFR_RNDN);
  return r;
}

BigReal pow10(long e, long digits) {
  BigReal r = digits > 0 ? BigReal::with_digits(digits) : BigReal();
  mpfr_set_si(r.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
  return r;
}

BigReal default_tolerance() { return pow10(-WorkingPrecision::digits() / 2); }

}  // namespace icorr
