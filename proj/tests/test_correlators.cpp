#include <doctest.h>

#include "icorr/connection.hpp"
#include "icorr/correlators.hpp"
#include "oracles.hpp"

using namespace icorr;
using namespace icorr::corr;

namespace {

bool close(const BigReal& a, const BigReal& b, const BigReal& tol) {
  return abs(a - b) <= tol;
}

BigReal cos_pi4() { return sqrt(BigReal(2)) / 2; }

}  // namespace

TEST_CASE("contour weights P and Q") {
  WorkingPrecision::set_digits(50);
  BigReal k("0.6");
  SUBCASE("P(0,k) = 1 and P(z,0) = 1") {
    CHECK(close(weight_P(BigComplex(BigReal(0)), k).re(), BigReal(1), pow10(-45)));
    BigComplex z(BigReal("0.3"), BigReal("0.4"));
    CHECK(close(weight_P(z, BigReal(0)).re(), BigReal(1), pow10(-45)));
    CHECK(weight_P(z, BigReal(0)).im().is_zero());
  }
  SUBCASE("P Q = 1 on contour points") {
    CircleQuadrature q = CircleQuadrature::make(BigReal("0.8"), 16);
    for (const BigComplex& z : q.nodes) {
      BigComplex prod = weight_P(z, k) * weight_Q(z, k);
      CHECK(close(prod.re(), BigReal(1), pow10(-45)));
      CHECK(close(prod.im(), BigReal(0), pow10(-45)));
    }
  }
  SUBCASE("branch cut raises") {
    // 1 - k z real and negative at z = 3 (k = 0.6): on the cut
    CHECK_THROWS_AS(weight_P(BigComplex(BigReal(3)), k), BranchCutError);
  }
}

TEST_CASE("Fourier coefficients of the Toeplitz symbol") {
  WorkingPrecision::set_digits(50);
  SUBCASE("k = 0 gives the Kronecker delta") {
    CHECK(close(fourier_coeff(0, BigReal(0)), BigReal(1), pow10(-40)));
    CHECK(close(fourier_coeff(3, BigReal(0)), BigReal(0), pow10(-40)));
  }
  SUBCASE("a_0 = (2/pi) E(k) against the series oracle") {
    BigReal k("0.6");
    BigReal expect = 2 * oracle::elliptic_E_series(k) / pi();
    CHECK(close(fourier_coeff(0, k), expect, pow10(-40)));
  }
  SUBCASE("a_0 at k = 1 is 2/pi (kinked symbol, relaxed tolerance)") {
    long used = 0;
    std::vector<BigReal> a = fourier_coeff_block(0, BigReal(1), pow10(-7), &used);
    CHECK(close(a[0], 2 / pi(), pow10(-6)));
  }
  SUBCASE("a_1(k=0.6) against a doubled-precision oracle") {
    BigReal a1 = fourier_coeff(1, BigReal("0.6"));
    ScopedPrecision guard(100);
    BigReal a1_hi = fourier_coeff(1, BigReal("0.6", 100));
    CHECK(abs(widen(a1, 100) - a1_hi) < pow10(-40));
  }
}

TEST_CASE("Toeplitz determinant correlator") {
  WorkingPrecision::set_digits(50);
  SUBCASE("N = 0 empty determinant") {
    CorrelatorValue v = toeplitz_corr(0, BigReal("0.3"));
    CHECK(v.value == BigReal(1));
  }
  SUBCASE("t = 0 gives 1 for all N") {
    for (long N : {1L, 2L, 4L})
      CHECK(close(toeplitz_corr(N, BigReal(0)).value, BigReal(1), pow10(-40)));
  }
  SUBCASE("decreases with N at fixed t") {
    BigReal t("0.4");
    BigReal prev = toeplitz_corr(0, t).value;
    for (long N = 1; N <= 4; ++N) {
      BigReal cur = toeplitz_corr(N, t).value;
      CHECK(cur < prev);
      CHECK(cur > BigReal(0));
      prev = cur;
    }
  }
  SUBCASE("t -> 1 approaches the Ising constant with its log correction (N = 2)") {
    BigReal v = toeplitz_corr(2, BigReal("0.99")).value;
    BigReal expanded = conn::ising_t1_expansion(2, BigReal("0.01"));
    CHECK(abs(v / expanded - 1) < BigReal::ratio(1, 100));
    BigReal c_inf = pow(2 / pi(), 2L) * BigReal::ratio(4, 3);
    CHECK(abs(conn::ising_t1_constant(2) - c_inf) < pow10(-44));
  }
}

TEST_CASE("Fredholm F^{(2n)}") {
  WorkingPrecision::set_digits(50);
  SUBCASE("leading small-t coefficient calibration") {
    BigReal t = pow10(-3);
    FredholmConfig cfg;
    for (long N = 0; N <= 2; ++N) {
      BigReal lead = sf::pochhammer(1, 2, N) * sf::pochhammer(3, 2, N) /
                     (4 * pow(sf::pochhammer(BigReal(1), N + 1), 2L));
      BigReal f2 = fredholm_F2n(N, t, 1, cfg);
      CHECK(abs(f2 / pow(t, N + 1) / lead - 1) < BigReal::ratio(1, 100));
    }
  }
  SUBCASE("trace path equals the tensor-product oracle (n = 1)") {
    BigReal t("0.1");
    BigReal rho = (1 + sqrt(t)) / 2;
    long M = 24;
    FredholmConfig cfg;
    cfg.points = M;
    cfg.radius = rho;
    FredholmOperator op(0, t, cfg);
    BigReal trace_form = op.trace_power(1);
    BigReal tensor = oracle::fredholm_F2n_tensor(0, t, 1, rho, M);
    CHECK(abs(trace_form - tensor) < pow10(-20));
  }
  SUBCASE("trace path equals the tensor-product oracle (n = 2)") {
    BigReal t("0.1");
    BigReal rho = (1 + sqrt(t)) / 2;
    long M = 12;
    FredholmConfig cfg;
    cfg.points = M;
    cfg.radius = rho;
    FredholmOperator op(1, t, cfg);
    BigReal trace_form = -op.trace_power(2) / 2;  // F^{(4)}
    BigReal tensor = oracle::fredholm_F2n_tensor(1, t, 2, rho, M);
    CHECK(abs(trace_form - tensor) < pow10(-20));
  }
}

TEST_CASE("fredholm_corr") {
  WorkingPrecision::set_digits(50);
  SUBCASE("lambda = 0 is the quarter-root law exactly") {
    BigReal t("0.37");
    CorrelatorValue v = fredholm_corr(0, t, BigReal(0));
    CHECK(close(v.value, pow(1 - t, BigReal::ratio(1, 4)), pow10(-45)));
  }
  SUBCASE("lambda = 1 matches Toeplitz at N = 2, t = 0.25") {
    BigReal t = BigReal::ratio(1, 4);
    BigReal fred = fredholm_corr(2, t, BigReal(1)).value;
    BigReal toep = toeplitz_corr(2, t).value;
    CHECK(abs(fred - toep) < pow10(-12));
  }
  SUBCASE("exact closed form at N=0, lambda=cos(pi/4), t=0.5") {
    BigReal t = BigReal::ratio(1, 2);
    BigReal expect = pow(BigReal(2), BigReal::ratio(-1, 4)) *
                     pow(t, BigReal::ratio(1, 16)) *
                     pow(1 + sqrt(t), BigReal::ratio(1, 4));
    BigReal got = fredholm_corr(0, t, cos_pi4()).value;
    CHECK(abs(got - expect) < pow10(-20));
  }
  SUBCASE("TracePowers agrees with LogDet, closer as n_max grows") {
    BigReal t("0.3"), lam("0.5");
    FredholmConfig logdet;
    BigReal ref = fredholm_corr(0, t, lam, logdet).value;
    BigReal prev_diff(1);
    for (long cap : {2L, 4L, 6L}) {
      FredholmConfig tp;
      tp.mode = FredholmMode::TracePowers;
      tp.lambda_series_cap = cap;
      tp.target_tol = pow10(-40);  // force the cap to bind
      BigReal diff;
      try {
        diff = abs(fredholm_corr(0, t, lam, tp).value - ref);
      } catch (const NoConvergence&) {
        // cap bound with tight tol: evaluate through fredholm_F2n directly
        FredholmConfig f;
        BigReal acc(0);
        for (long n = 1; n <= cap; ++n)
          acc += pow(lam, 2 * n) * fredholm_F2n(0, t, n, f);
        diff = abs(pow(1 - t, BigReal::ratio(1, 4)) * exp(acc) - ref);
      }
      CHECK(diff < prev_diff);
      prev_diff = diff;
    }
    CHECK(prev_diff < pow10(-8));
  }
  SUBCASE("contour independence") {
    BigReal t("0.4");
    BigReal k = sqrt(t);
    FredholmConfig c1, c2;
    c1.radius = (1 + k) / 2;
    c2.radius = pow(k, BigReal::ratio(2, 5));
    BigReal v1 = fredholm_corr(1, t, BigReal("0.7"), c1).value;
    BigReal v2 = fredholm_corr(1, t, BigReal("0.7"), c2).value;
    CHECK(abs(v1 - v2) < pow10(-20));
  }
  SUBCASE("inadmissible radius raises BranchCutError") {
    FredholmConfig cfg;
    cfg.radius = BigReal("0.3");  // below k = sqrt(0.5)
    CHECK_THROWS_AS(fredholm_corr(0, BigReal("0.5"), BigReal("0.5"), cfg),
                    BranchCutError);
  }
  SUBCASE("quadrature cap raises NoConvergence") {
    FredholmConfig cfg;
    cfg.max_points = 32;
    CHECK_THROWS_AS(fredholm_corr(0, BigReal("0.9"), BigReal("0.5"), cfg),
                    NoConvergence);
  }
}

TEST_CASE("theta_corr closed forms") {
  WorkingPrecision::set_digits(50);
  SUBCASE("N=0, lambda=1 gives 1") {
    CHECK(close(theta_corr(0, BigReal("0.3"), BigReal(1)).value, BigReal(1),
                pow10(-40)));
  }
  SUBCASE("N=0, lambda=0 gives the quarter-root law") {
    BigReal t("0.7");
    CHECK(close(theta_corr(0, t, BigReal(0)).value,
                pow(1 - t, BigReal::ratio(1, 4)), pow10(-44)));
  }
  SUBCASE("N=1 exact closed form at lambda=cos(pi/4), t=0.5") {
    BigReal t = BigReal::ratio(1, 2);
    BigReal expect = pow(BigReal(2), BigReal::ratio(-3, 4)) *
                     pow(t, BigReal::ratio(1, 16)) *
                     pow(1 + sqrt(t), BigReal::ratio(3, 4));
    CHECK(abs(theta_corr(1, t, cos_pi4()).value - expect) < pow10(-40));
  }
  SUBCASE("N=1, lambda=0 also reduces to the quarter-root law") {
    BigReal t("0.45");
    CHECK(close(theta_corr(1, t, BigReal(0)).value,
                pow(1 - t, BigReal::ratio(1, 4)), pow10(-44)));
  }
  SUBCASE("dual-nome branch is continuous with the direct branch") {
    // direct series at t = 0.995 computed inline vs the production dual path
    BigReal t("0.995"), lam("0.5");
    sf::Nome nm = sf::nome(t);
    BigReal u = acos(lam);
    BigReal direct = sf::theta(3, u, nm.q) / sf::theta(3, BigReal(0), nm.q);
    BigReal production = theta_corr(0, t, lam).value;
    CHECK(abs(direct - production) < pow10(-30));
  }
  SUBCASE("dual-nome N=1 matches direct series across the switch") {
    BigReal t("0.995"), lam("0.3");
    sf::Nome nm = sf::nome(t);
    BigReal u = acos(lam);
    BigReal direct = -sf::theta2_du(u, nm.q) /
                     (sin(u) * sf::theta(2, BigReal(0), nm.q) *
                      pow(sf::theta(3, BigReal(0), nm.q), 2L));
    CHECK(abs(direct - theta_corr(1, t, lam).value) < pow10(-30));
  }
  SUBCASE("dual-nome N=1 handles the u = 0 limit (lambda = 1)") {
    BigReal t("0.995");
    sf::Nome nm = sf::nome(t);
    // termwise limit of -theta2'(u)/sin(u) at u=0: 2 sum q^{(n+1/2)^2}(2n+1)^2
    BigReal tol = pow10(-(WorkingPrecision::digits() + 5));
    BigReal num = make_with_bits(WorkingPrecision::bits());
    BigReal p = sqrt(sqrt(nm.q));
    BigReal step = nm.q * nm.q;
    BigReal mul = step;
    for (long n = 0; n < 1000; ++n) {
      num += 2 * BigReal((2 * n + 1) * (2 * n + 1)) * p;
      if (p * BigReal((2 * n + 1) * (2 * n + 1)) < tol) break;
      p = p * mul;
      mul = mul * step;
    }
    BigReal direct = num / (sf::theta(2, BigReal(0), nm.q) *
                            pow(sf::theta(3, BigReal(0), nm.q), 2L));
    CHECK(abs(direct - theta_corr(1, t, BigReal(1)).value) < pow10(-30));
  }
}

TEST_CASE("algebraic correlators") {
  WorkingPrecision::set_digits(50);
  SUBCASE("support set") {
    CHECK(algebraic_supported(0, cos_pi4()));
    CHECK(algebraic_supported(2, cos_pi4()));
    CHECK(!algebraic_supported(3, cos_pi4()));
    CHECK(algebraic_supported(0, BigReal::ratio(1, 2)));
    CHECK(!algebraic_supported(1, BigReal::ratio(1, 2)));
    CHECK_THROWS_AS(algebraic_corr(1, BigReal("0.5"), BigReal::ratio(1, 2)),
                    DomainError);
  }
  SUBCASE("cos(pi/3) small-t series (1-t)^{1/4}(1 + t/16 + O(t^2))") {
    BigReal t = pow10(-4);
    BigReal v = algebraic_corr(0, t, BigReal::ratio(1, 2)).value;
    BigReal lead = pow(1 - t, BigReal::ratio(1, 4)) * (1 + t / 16);
    CHECK(abs(v - lead) < pow10(-7));
  }
  SUBCASE("cos(pi/3) equals theta at t = 0.5 (branch point of the tracker)") {
    BigReal t = BigReal::ratio(1, 2);
    BigReal alg = algebraic_corr(0, t, BigReal::ratio(1, 2)).value;
    BigReal th = theta_corr(0, t, BigReal::ratio(1, 2)).value;
    CHECK(abs(alg - th) < pow10(-12));
  }
  SUBCASE("cos(pi/4), N=2 t->1 bracket coefficient 21/20") {
    BigReal x = pow10(-8);
    BigReal t = 1 - x;
    BigReal K = pow(BigReal(2), BigReal::ratio(-5, 4)) * BigReal::ratio(5, 4);
    BigReal v = algebraic_corr(2, t, cos_pi4()).value;
    BigReal lead = (v / (K * pow(x, BigReal::ratio(1, 16))) - 1) / sqrt(x);
    CHECK(abs(lead - BigReal::ratio(21, 20)) < pow10(-3));
  }
}

TEST_CASE("small-t expansion coefficients") {
  WorkingPrecision::set_digits(50);
  SUBCASE("order must reach the leading power") {
    CHECK_THROWS_AS(small_t_expansion(2, cos_pi4(), 2), DomainError);
  }
  SUBCASE("N=0 cos(pi/4): 1/8, 5/64, 15/256") {
    std::vector<BigReal> c = small_t_expansion(0, cos_pi4(), 3);
    CHECK(abs(c[0] - BigReal::ratio(1, 8)) < pow10(-8));
    CHECK(abs(c[1] - BigReal::ratio(5, 64)) < pow10(-7));
    CHECK(abs(c[2] - BigReal::ratio(15, 256)) < pow10(-6));
  }
  SUBCASE("leading coefficient matches the rising-factorial formula") {
    BigReal lam("0.73");
    long N = 1;
    std::vector<BigReal> c = small_t_expansion(N, lam, 3);
    BigReal lead = lam * lam * sf::pochhammer(1, 2, N) * sf::pochhammer(3, 2, N) /
                   (4 * pow(sf::pochhammer(BigReal(1), N + 1), 2L));
    CHECK(abs(c[0]) < pow10(-8));  // no t^1 term for N = 1
    CHECK(abs(c[1] - lead) < pow10(-7));
  }
}

TEST_CASE("eval dispatch and constraints") {
  WorkingPrecision::set_digits(50);
  CorrelatorRequest req;
  req.t = BigReal("0.5");
  SUBCASE("auto picks theta for N <= 1") {
    req.N = 1;
    req.lambda = BigReal("0.37");
    CHECK(eval(req).method == Method::Theta);
  }
  SUBCASE("auto picks algebraic for supported (N, lambda)") {
    req.N = 2;
    req.lambda = cos_pi4();
    CHECK(eval(req).method == Method::Algebraic);
  }
  SUBCASE("auto picks toeplitz at lambda = 1") {
    req.N = 2;
    req.lambda = BigReal(1);
    CHECK(eval(req).method == Method::Toeplitz);
  }
  SUBCASE("auto falls back to fredholm") {
    req.N = 2;
    req.lambda = BigReal("0.6");
    CHECK(eval(req).method == Method::Fredholm);
  }
  SUBCASE("toeplitz demands lambda = 1") {
    req.N = 2;
    req.lambda = BigReal("0.9");
    req.method = Method::Toeplitz;
    CHECK_THROWS_WITH_AS(eval(req), "eval: Toeplitz method requires lambda = 1",
                         DomainError);
  }
  SUBCASE("cross-method sanity on one point each") {
    req.N = 1;
    req.lambda = BigReal(1);
    req.method = Method::Toeplitz;
    BigReal toep = eval(req).value;
    req.method = Method::Theta;
    BigReal th = eval(req).value;
    CHECK(abs(toep - th) < pow10(-20));
  }
}
