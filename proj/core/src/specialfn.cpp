#include "icorr/specialfn.hpp"

namespace icorr::sf {

BigReal elliptic_K(const BigReal& k) {
  if (k.sign() < 0 || k >= BigReal(1)) throw DomainError("elliptic_K: need 0 <= k < 1");
  BigReal kp = sqrt(1 - k * k);
  BigReal a = make_with_bits(k.precision_bits());
  mpfr_set_si(a.raw(), 1, MPFR_RNDN);
  BigReal b = kp;
  BigReal tol = pow10(-(a.precision_digits() + 5));
  // AGM(1, k'): quadratic convergence, ~log2(P) sweeps.
  for (int it = 0; it < 200; ++it) {
    if (abs(a - b) <= tol * a) break;
    BigReal am = (a + b) / 2;
    BigReal gm = sqrt(a * b);
    a = am;
    b = gm;
  }
  return pi(a.precision_digits()) / (2 * a);
}

EllipticPair elliptic_pair(const BigReal& k) {
  BigReal kp = sqrt(1 - k * k);
  return {elliptic_K(k), elliptic_K(kp)};
}

Nome nome(const BigReal& t) {
  if (t.sign() <= 0 || t >= BigReal(1)) throw DomainError("nome: need 0 < t < 1");
  Nome n;
  n.t = t;
  n.k = sqrt(t);
  EllipticPair ep = elliptic_pair(n.k);
  n.K = ep.K;
  n.Kprime = ep.Kprime;
  n.q = exp(-pi(t.precision_digits()) * n.Kprime / n.K);
  return n;
}

namespace {

BigReal series_tol(const BigReal& q) {
  return pow10(-(q.precision_digits() + 5));
}

}  // namespace

BigReal theta(int j, const BigReal& u, const BigReal& q) {
  if (q.sign() < 0 || q >= BigReal(1)) throw DomainError("theta: need 0 <= q < 1");
  BigReal tol = series_tol(q);
  if (j == 2) {
    // 2 sum_{n>=0} q^{(n+1/2)^2} cos[(2n+1)u]; the q-power gains a factor
    // q^{2n+2} per term, tracked by the (p, mul) ladder.
    BigReal acc = make_with_bits(q.precision_bits());
    BigReal p = sqrt(sqrt(q));  // q^{1/4}
    BigReal step = q * q;
    BigReal mul = step;
    for (long n = 0; n < 100000; ++n) {
      acc += p * cos(BigReal(2 * n + 1) * u);
      if (p < tol) break;
      p = p * mul;
      mul = mul * step;
    }
    return 2 * acc;
  }
  if (j == 3 || j == 4) {
    BigReal one = make_with_bits(q.precision_bits());
    mpfr_set_si(one.raw(), 1, MPFR_RNDN);
    BigReal acc = one;
    BigReal p = q;          // q^{n^2}
    BigReal mul = q * q * q;  // q^{2n+1} for n=1 is q^3
    BigReal step = q * q;
    for (long n = 1; n < 100000; ++n) {
      BigReal c = cos(BigReal(2 * n) * u);
      BigReal term = 2 * p * c;
      if (j == 4 && (n & 1)) term = -term;
      acc += term;
      if (p < tol) break;
      p = p * mul;
      mul = mul * step;
    }
    return acc;
  }
  throw DomainError("theta: j must be 2, 3 or 4");
}

BigReal theta2_du(const BigReal& u, const BigReal& q) {
  if (q.sign() < 0 || q >= BigReal(1)) throw DomainError("theta2_du: need 0 <= q < 1");
  BigReal tol = series_tol(q);
  BigReal acc = make_with_bits(q.precision_bits());
  BigReal p = sqrt(sqrt(q));
  BigReal step = q * q;
  BigReal mul = step;
  for (long n = 0; n < 100000; ++n) {
    long m = 2 * n + 1;
    acc -= p * BigReal(m) * sin(BigReal(m) * u);
    if (p * BigReal(m) < tol) break;
    p = p * mul;
    mul = mul * step;
  }
  return 2 * acc;
}

BigReal theta3_imag(const BigReal& v, const BigReal& q) {
  BigReal tol = series_tol(q);
  BigReal one = make_with_bits(q.precision_bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  BigReal acc = one;
  BigReal p = q;
  BigReal mul = q * q * q;
  BigReal step = q * q;
  for (long n = 1; n < 100000; ++n) {
    BigReal term = 2 * p * cosh(BigReal(2 * n) * v);
    acc += term;
    if (abs(term) < tol) break;
    p = p * mul;
    mul = mul * step;
  }
  return acc;
}

BigReal theta4_imag(const BigReal& v, const BigReal& q) {
  BigReal tol = series_tol(q);
  BigReal one = make_with_bits(q.precision_bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  BigReal acc = one;
  BigReal p = q;
  BigReal mul = q * q * q;
  BigReal step = q * q;
  for (long n = 1; n < 100000; ++n) {
    BigReal term = 2 * p * cosh(BigReal(2 * n) * v);
    if (n & 1) term = -term;
    acc += term;
    if (abs(term) < tol) break;
    p = p * mul;
    mul = mul * step;
  }
  return acc;
}

BigReal theta4_imag_dv(const BigReal& v, const BigReal& q) {
  BigReal tol = series_tol(q);
  BigReal acc = make_with_bits(q.precision_bits());
  BigReal p = q;
  BigReal mul = q * q * q;
  BigReal step = q * q;
  for (long n = 1; n < 100000; ++n) {
    BigReal term = 4 * BigReal(n) * p * sinh(BigReal(2 * n) * v);
    if (n & 1) term = -term;
    acc += term;
    if (abs(term) < tol) break;
    p = p * mul;
    mul = mul * step;
  }
  return acc;
}

BigReal theta4_imag_dv2(const BigReal& v, const BigReal& q) {
  BigReal tol = series_tol(q);
  BigReal acc = make_with_bits(q.precision_bits());
  BigReal p = q;
  BigReal mul = q * q * q;
  BigReal step = q * q;
  for (long n = 1; n < 100000; ++n) {
    BigReal term = 8 * BigReal(n * n) * p * cosh(BigReal(2 * n) * v);
    if (n & 1) term = -term;
    acc += term;
    if (abs(term) < tol) break;
    p = p * mul;
    mul = mul * step;
  }
  return acc;
}

BigReal pochhammer(const BigReal& a, long n) {
  if (n < 0) throw DomainError("pochhammer: n must be >= 0");
  BigReal acc = make_with_bits(a.precision_bits());
  mpfr_set_si(acc.raw(), 1, MPFR_RNDN);
  for (long i = 0; i < n; ++i) acc *= a + i;
  return acc;
}

BigReal pochhammer(long num, long den, long n) {
  return pochhammer(BigReal::ratio(num, den), n);
}

BigReal harmonic(long N) {
  if (N < 0) throw DomainError("harmonic: N must be >= 0");
  BigReal acc;
  for (long n = 1; n <= N; ++n) acc += BigReal::ratio(1, n);
  return acc;
}

BigReal euler_gamma(long digits) { return euler_gamma_const(digits); }

CouplingResult t_from_couplings(const BigReal& Ev_over_kT, const BigReal& Eh_over_kT) {
  if (Ev_over_kT.sign() <= 0 || Eh_over_kT.sign() <= 0)
    throw DomainError("t_from_couplings: couplings must be positive");
  BigReal s = sinh(2 * Ev_over_kT) * sinh(2 * Eh_over_kT);
  CouplingResult r;
  r.k = 1 / s;
  r.t = r.k * r.k;
  return r;
}

}  // namespace icorr::sf
