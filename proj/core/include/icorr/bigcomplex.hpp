#pragma once

#include "icorr/bigreal.hpp"

namespace icorr {

/// Complex scalar over BigReal. Components share precision (min of the two
/// at construction if they differ).
class BigComplex {
 public:
  BigComplex() = default;
  BigComplex(BigReal real, BigReal imag);
  BigComplex(const BigReal& real) : re_(real), im_(make_with_bits(real.precision_bits())) {}
  BigComplex(long real) : BigComplex(BigReal(real)) {}

  static BigComplex i_unit();

  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  BigReal& re() { return re_; }
  BigReal& im() { return im_; }

  mpfr_prec_t precision_bits() const { return re_.precision_bits(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  BigComplex operator-() const { return BigComplex(-re_, -im_); }
  BigComplex conj() const { return BigComplex(re_, -im_); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
  }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
  }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
  }
  friend BigComplex operator*(const BigComplex& a, const BigReal& s) {
    return BigComplex(a.re_ * s, a.im_ * s);
  }
  friend BigComplex operator*(const BigReal& s, const BigComplex& a) { return a * s; }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b);

  BigComplex& operator+=(const BigComplex& o) { return *this = *this + o; }
  BigComplex& operator-=(const BigComplex& o) { return *this = *this - o; }
  BigComplex& operator*=(const BigComplex& o) { return *this = *this * o; }

  /// |z|^2 — cheaper than abs() when only comparisons are needed.
  BigReal abs2() const { return re_ * re_ + im_ * im_; }
  BigReal abs() const { return hypot(re_, im_); }

  std::string str(long digits = 0) const;

 private:
  BigReal re_, im_;
};

/// Principal square root (branch cut on the negative real axis).
BigComplex sqrt(const BigComplex& z);

/// z^n for integer n >= 0 by binary powering.
BigComplex pow(const BigComplex& z, long n);

}  // namespace icorr
