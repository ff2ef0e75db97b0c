#include <doctest.h>

#include "icorr/specialfn.hpp"
#include "oracles.hpp"

using namespace icorr;
using namespace icorr::sf;
using oracle::elliptic_E_series;
using oracle::elliptic_K_series;

namespace {

bool close(const BigReal& a, const BigReal& b, const BigReal& tol) {
  return abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("elliptic_K") {
  WorkingPrecision::set_digits(50);
  SUBCASE("K(0) = pi/2") {
    CHECK(close(elliptic_K(BigReal(0)), pi() / 2, pow10(-45)));
  }
  SUBCASE("self-dual point k = 1/sqrt(2)") {
    BigReal k = sqrt(BigReal(2)) / 2;
    EllipticPair ep = elliptic_pair(k);
    CHECK(close(ep.K, ep.Kprime, pow10(-45)));
  }
  SUBCASE("hypergeometric series oracle at k = 0.5") {
    BigReal k("0.5");
    CHECK(close(elliptic_K(k), elliptic_K_series(k), pow10(-45)));
  }
  SUBCASE("domain") { CHECK_THROWS_AS(elliptic_K(BigReal(1)), DomainError); }
}

TEST_CASE("nome") {
  WorkingPrecision::set_digits(50);
  SUBCASE("q(1/2) = exp(-pi) at the self-dual point") {
    CHECK(close(nome(BigReal::ratio(1, 2)).q, exp(-pi()), pow10(-45)));
  }
  SUBCASE("monotone increasing in t") {
    BigReal prev(0);
    for (int i = 1; i <= 9; ++i) {
      BigReal q = nome(BigReal::ratio(i, 10)).q;
      CHECK(q > prev);
      prev = q;
    }
  }
  SUBCASE("independent doubled-precision AGM oracle at t = 0.9") {
    BigReal q50 = nome(BigReal::ratio(9, 10)).q;
    ScopedPrecision guard(100);
    BigReal q100 = oracle::nome_oracle(BigReal::ratio(9, 10));
    CHECK(abs(widen(q50, 100) - q100) < pow10(-45));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(nome(BigReal(0)), DomainError);
    CHECK_THROWS_AS(nome(BigReal(1)), DomainError);
  }
}

TEST_CASE("theta functions") {
  WorkingPrecision::set_digits(50);
  BigReal q = nome(BigReal::ratio(1, 2)).q;
  SUBCASE("empty series at q = 0") {
    CHECK(theta(3, BigReal("0.7"), BigReal(0)) == BigReal(1));
  }
  SUBCASE("theta3(pi/2) = theta4(0)") {
    BigReal u = pi() / 2;
    CHECK(close(theta(3, u, q), theta(4, BigReal(0), q), pow10(-45)));
  }
  SUBCASE("quartic null-value identity (theta4/theta3)^4 = 1 - t") {
    for (int i = 1; i <= 9; ++i) {
      BigReal t = BigReal::ratio(i, 10);
      BigReal qq = nome(t).q;
      BigReal ratio = theta(4, BigReal(0), qq) / theta(3, BigReal(0), qq);
      CHECK(close(pow(ratio, 4L), 1 - t, pow10(-(WorkingPrecision::digits() - 10))));
    }
  }
  SUBCASE("modular identity at u=0.3, k=0.6") {
    BigReal u("0.3"), k("0.6");
    EllipticPair ep = elliptic_pair(k);
    BigReal qdir = exp(-pi() * ep.Kprime / ep.K);
    BigReal qdual = exp(-pi() * ep.K / ep.Kprime);
    BigReal c = ep.K / ep.Kprime;
    BigReal lhs = theta3_imag(c * u, qdual) * exp(-c * u * u / pi());
    BigReal rhs = sqrt(ep.Kprime / ep.K) * theta(3, u, qdir);
    CHECK(abs(lhs - rhs) < pow10(-30));
  }
  SUBCASE("series truncation is stable against extra precision") {
    BigReal u("0.7");
    BigReal v50 = theta(2, u, q);
    ScopedPrecision guard(60);
    BigReal t60 = BigReal::ratio(1, 2);
    BigReal v60 = theta(2, widen(u, 60), nome(t60).q);
    CHECK(abs(widen(v50, 60) - v60) < pow10(-45));
  }
  SUBCASE("theta2_du matches a numerical u-derivative") {
    BigReal u("0.4");
    BigReal h = pow10(-10);
    BigReal num = (theta(2, u + h, q) - theta(2, u - h, q)) / (2 * h);
    CHECK(abs(theta2_du(u, q) - num) < pow10(-18));
  }
}

TEST_CASE("pochhammer, harmonic, euler gamma") {
  WorkingPrecision::set_digits(50);
  CHECK(pochhammer(1, 2, 0) == BigReal(1));
  CHECK(close(pochhammer(1, 2, 1) * pochhammer(3, 2, 1), BigReal::ratio(3, 4),
              pow10(-45)));
  CHECK(close(pochhammer(1, 2, 2) * pochhammer(3, 2, 2), BigReal::ratio(45, 16),
              pow10(-45)));
  CHECK(harmonic(0).is_zero());
  CHECK(close(harmonic(2), BigReal::ratio(3, 2), pow10(-45)));
  CHECK(close(euler_gamma(30),
              BigReal("0.577215664901532860606512090082", 35), pow10(-29)));
  SUBCASE("harmonic(N) - ln N -> gamma") {
    long N = 100000;
    BigReal approx = harmonic(N) - log(BigReal(N)) - BigReal::ratio(1, 2 * N);
    CHECK(abs(approx - euler_gamma()) < pow10(-10));
  }
}

TEST_CASE("t_from_couplings") {
  WorkingPrecision::set_digits(50);
  // sinh(2E/kT) products: solve sinh(x)=s at x = asinh(s)
  auto inv = [](const BigReal& s) {
    // asinh(s)/2 so that sinh(2*arg) = s
    return log(s + sqrt(s * s + 1)) / 2;
  };
  SUBCASE("isotropic critical point: product 1 -> t = 1") {
    BigReal e = inv(BigReal(1));
    CouplingResult r = t_from_couplings(e, e);
    CHECK(close(r.t, BigReal(1), pow10(-40)));
  }
  SUBCASE("each sinh factor 2 -> t = 1/16") {
    BigReal e = inv(BigReal(2));
    CouplingResult r = t_from_couplings(e, e);
    CHECK(close(r.t, BigReal::ratio(1, 16), pow10(-40)));
  }
  SUBCASE("each sinh factor 1.25 -> t = 0.4096") {
    BigReal e = inv(BigReal::ratio(5, 4));
    CouplingResult r = t_from_couplings(e, e);
    CHECK(close(r.t, BigReal("0.4096"), pow10(-40)));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(t_from_couplings(BigReal(0), BigReal(1)), DomainError);
  }
}

TEST_CASE("elliptic E series oracle sanity (used by correlator tests)") {
  WorkingPrecision::set_digits(50);
  // E(0) = pi/2
  CHECK(abs(elliptic_E_series(BigReal(0)) - pi() / 2) < pow10(-45));
}
