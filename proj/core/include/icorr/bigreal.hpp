#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "icorr/errors.hpp"

namespace icorr {

/// Thread-local working precision, in decimal digits (default 50, minimum 30).
/// Every BigReal constructed without an explicit precision uses the current
/// working precision; it is fixed at construction from then on.
class WorkingPrecision {
 public:
  static long digits();
  static void set_digits(long d);
  static mpfr_prec_t bits();
  static mpfr_prec_t bits_for(long digits);
  static long digits_for(mpfr_prec_t bits);
};

/// RAII guard: sets the working precision for a scope (oracles at doubled
/// precision, seeds at raised precision) and restores it on exit.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(long digits) : saved_(WorkingPrecision::digits()) {
    WorkingPrecision::set_digits(digits);
  }
  ~ScopedPrecision() { WorkingPrecision::set_digits(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  long saved_;
};

/// Arbitrary-precision real scalar on MPFR. Precision (decimal digits) is
/// fixed at construction; binary operations propagate the min of the operand
/// precisions. Operations that would produce NaN/Inf throw instead of letting
/// the value escape.
class BigReal {
 public:
  BigReal();  // 0 at working precision
  BigReal(long v);
  BigReal(int v) : BigReal(static_cast<long>(v)) {}
  explicit BigReal(double v);
  explicit BigReal(const char* decimal);
  explicit BigReal(const std::string& decimal, long digits = 0);

  BigReal(const BigReal& o);
  BigReal(BigReal&& o) noexcept;
  BigReal& operator=(const BigReal& o);
  BigReal& operator=(BigReal&& o) noexcept;
  ~BigReal();

  /// Zero at an explicit precision.
  static BigReal with_digits(long digits);
  /// num/den rounded at `digits` (0 = working precision).
  static BigReal ratio(long num, long den, long digits = 0);

  long precision_digits() const;
  mpfr_prec_t precision_bits() const { return mpfr_get_prec(v_); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigReal operator-() const;
  BigReal& operator+=(const BigReal& o);
  BigReal& operator-=(const BigReal& o);
  BigReal& operator*=(const BigReal& o);
  BigReal& operator/=(const BigReal& o);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator+(const BigReal& a, long b);
  friend BigReal operator-(const BigReal& a, long b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator/(const BigReal& a, long b);
  friend BigReal operator+(long a, const BigReal& b) { return b + a; }
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator-(long a, const BigReal& b);
  friend BigReal operator/(long a, const BigReal& b);

  friend int cmp(const BigReal& a, const BigReal& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigReal& a, const BigReal& b) { return cmp(a, b) < 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const BigReal& a, const BigReal& b) { return cmp(a, b) != 0; }
  friend bool operator<(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
  friend bool operator>(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
  friend bool operator<=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
  friend bool operator>=(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

  /// Decimal rendering, deterministic for a given (value, digits) pair.
  /// digits = 0 renders at the value's own precision.
  std::string str(long digits = 0) const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  explicit BigReal(mpfr_prec_t bits, int /*tag*/);  // uninitialized-value ctor
  void check_finite(const char* op) const;
  mpfr_t v_;

  friend BigReal make_with_bits(mpfr_prec_t bits);
};

/// Zero with an explicit bit precision (internal plumbing for kernels).
BigReal make_with_bits(mpfr_prec_t bits);

/// x re-rounded at `digits` (lifts a reduced-precision value back into a
/// wider computation; the numeric error stays whatever it was).
BigReal widen(const BigReal& x, long digits);

BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal cbrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal expm1(const BigReal& x);
BigReal log(const BigReal& x);
BigReal log1p(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal tan(const BigReal& x);
BigReal asin(const BigReal& x);
BigReal acos(const BigReal& x);
BigReal atan(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
BigReal sinh(const BigReal& x);
BigReal cosh(const BigReal& x);
BigReal pow(const BigReal& base, const BigReal& e);
BigReal pow(const BigReal& base, long e);
BigReal hypot(const BigReal& x, const BigReal& y);
BigReal floor(const BigReal& x);
BigReal min(const BigReal& a, const BigReal& b);
BigReal max(const BigReal& a, const BigReal& b);

BigReal pi(long digits = 0);
BigReal euler_gamma_const(long digits = 0);
/// zeta(n) for integer n >= 2 at the given precision.
BigReal zeta_int(unsigned long n, long digits = 0);

/// 10^e at working precision; handy for tolerances like 10^(-P/2).
BigReal pow10(long e, long digits = 0);

/// Default absolute tolerance 10^(-P/2) per the numerics design.
BigReal default_tolerance();

}  // namespace icorr
