#pragma once

#include "icorr/bigreal.hpp"

namespace icorr::sf {

/// Complete elliptic integrals at modulus k and complementary modulus
/// k' = sqrt(1-k^2). K = Kprime at the self-dual point k^2 = 1/2.
struct EllipticPair {
  BigReal K;
  BigReal Kprime;
};

/// K(k) by the arithmetic-geometric mean, 0 <= k < 1.
BigReal elliptic_K(const BigReal& k);

EllipticPair elliptic_pair(const BigReal& k);

/// Nome data attached to t = k^2: q = exp(-pi K'/K).
struct Nome {
  BigReal t;
  BigReal k;
  BigReal q;
  BigReal K;
  BigReal Kprime;
};

Nome nome(const BigReal& t);

/// theta_j(u; q) for j in {2,3,4}:
///   theta2 = 2 sum q^{(n+1/2)^2} cos[(2n+1)u]
///   theta3 = 1 + 2 sum q^{n^2} cos(2nu)
///   theta4 = 1 + 2 sum (-1)^n q^{n^2} cos(2nu)
/// Series truncated when the term magnitude drops below 10^(-P-5).
BigReal theta(int j, const BigReal& u, const BigReal& q);

/// d/du theta2(u; q), termwise.
BigReal theta2_du(const BigReal& u, const BigReal& q);

/// theta3(i v; q) = 1 + 2 sum q^{n^2} cosh(2nv) — real for real v. These
/// imaginary-argument series are what the modular identities produce on the
/// dual-nome side; they stay real because cos(2n·iv) = cosh(2nv).
BigReal theta3_imag(const BigReal& v, const BigReal& q);
BigReal theta4_imag(const BigReal& v, const BigReal& q);
/// d/dv theta4(i v; q) = 4 sum (-1)^n n q^{n^2} sinh(2nv).
BigReal theta4_imag_dv(const BigReal& v, const BigReal& q);
/// d²/dv² theta4(i v; q) = 8 sum (-1)^n n^2 q^{n^2} cosh(2nv).
BigReal theta4_imag_dv2(const BigReal& v, const BigReal& q);

/// Rising factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1.
BigReal pochhammer(const BigReal& a, long n);
BigReal pochhammer(long num, long den, long n);

/// H_N = sum_{n=1}^N 1/n.
BigReal harmonic(long N);

/// Euler's constant gamma at the given precision (0 = working).
BigReal euler_gamma(long digits = 0);

/// Temperature variable from the couplings: t = (sinh(2Ev/kT) sinh(2Eh/kT))^-2,
/// with the modulus k = (sinh·sinh)^-1 alongside.
struct CouplingResult {
  BigReal t;
  BigReal k;
};
CouplingResult t_from_couplings(const BigReal& Ev_over_kT, const BigReal& Eh_over_kT);

}  // namespace icorr::sf
