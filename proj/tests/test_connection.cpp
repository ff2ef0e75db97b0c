#include <doctest.h>

#include "icorr/connection.hpp"
#include "icorr/painleve.hpp"

using namespace icorr;
using namespace icorr::conn;

namespace {

bool close(const BigReal& a, const BigReal& b, const BigReal& tol) {
  return abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("sigma <-> lambda") {
  WorkingPrecision::set_digits(50);
  CHECK(sigma_of_lambda(BigReal(1)).is_zero());
  CHECK(close(sigma_of_lambda(BigReal(0)), BigReal(1), pow10(-45)));
  CHECK(close(sigma_of_lambda(sqrt(BigReal(2)) / 2), BigReal::ratio(1, 2), pow10(-45)));
  CHECK(close(sigma_of_lambda(BigReal::ratio(1, 2)), BigReal::ratio(2, 3), pow10(-45)));
  for (int i = 1; i <= 9; ++i) {
    BigReal s = BigReal::ratio(i, 10);
    CHECK(close(sigma_of_lambda(lambda_of_sigma(s)), s, pow10(-42)));
  }
  CHECK_THROWS_AS(sigma_of_lambda(BigReal(2)), DomainError);
}

TEST_CASE("shat closed form") {
  WorkingPrecision::set_digits(50);
  BigReal s("0.63");
  CHECK(close(shat(0, s), pow(BigReal(16), s), pow10(-45)));
  for (long N : {0L, 1L, 3L, 6L})
    CHECK(close(shat(N, BigReal(1)), BigReal::ratio(16, 2 * N + 1), pow10(-44)));
  CHECK(close(shat(1, BigReal::ratio(1, 2)), BigReal::ratio(12, 5), pow10(-45)));
  // shat(2, 1/2) = 28/15 feeds the 21/20 bracket coefficient
  CHECK(close(shat(2, BigReal::ratio(1, 2)), BigReal::ratio(28, 15), pow10(-45)));
}

TEST_CASE("bigK closed form") {
  WorkingPrecision::set_digits(50);
  BigReal half = BigReal::ratio(1, 2);
  CHECK(close(bigK(0, half), pow(BigReal(2), BigReal::ratio(-1, 4)), pow10(-44)));
  CHECK(close(bigK(1, half), pow(BigReal(2), BigReal::ratio(-3, 4)), pow10(-44)));
  CHECK(close(bigK(2, half),
              pow(BigReal(2), BigReal::ratio(-5, 4)) * BigReal::ratio(5, 4),
              pow10(-44)));
  CHECK(close(bigK(0, BigReal::ratio(2, 3)), pow(BigReal(2), BigReal::ratio(-4, 9)),
              pow10(-44)));
  for (long N = 0; N <= 6; ++N)
    CHECK(close(bigK(N, BigReal(1)), BigReal::ratio(1, 2), pow10(-43)));
  SUBCASE("sigma -> 0 limit equals the Ising constant") {
    for (long N : {1L, 2L, 3L})
      CHECK(abs(bigK(N, BigReal(0)) / ising_t1_constant(N) - 1) < pow10(-40));
  }
}

TEST_CASE("s_from_shat") {
  WorkingPrecision::set_digits(50);
  BigReal sh("2.4");
  CHECK(close(s_from_shat(BigReal(0), sh), sh, pow10(-45)));
  CHECK(close(s_from_shat(BigReal::ratio(1, 2), sh), sh / 3, pow10(-45)));
  CHECK_THROWS_AS(s_from_shat(BigReal(1), sh), DegenerateExponent);
  SUBCASE("consistency through the correlation expansion (sigma=0.3, N=1)") {
    BigReal sigma("0.3");
    long N = 1;
    BigReal sh1 = shat(N, sigma);
    BigReal K = bigK(N, sigma);
    BigReal s = s_from_shat(sigma, sh1);
    RealFn corr = [&](const BigReal& t) {
      return pvi::corr_expansion_t1(1 - t, sigma, sh1, K, N);
    };
    for (const char* xs : {"1e-5", "1e-6"}) {
      BigReal x(xs);
      auto [h, hp] = pvi::h_from_corr(corr, 1 - x);
      (void)hp;
      BigReal model = pvi::h_expansion_t1(x, sigma, s, N);
      // agreement to O(x^{min(1+sigma, 2-sigma)}) = O(x^{1.3})
      CHECK(abs(h - model) < pow(x, BigReal("1.25")));
    }
  }
}

TEST_CASE("bigK asymptotics") {
  WorkingPrecision::set_digits(50);
  SUBCASE("sigma = 1: products cancel and the ratio is exactly 1") {
    CHECK(abs(bigK(5, BigReal(1)) / bigK_asymptotic(5, BigReal(1)) - 1) < pow10(-40));
  }
  SUBCASE("sigma = 0.5: within 2% at N=50 and tightening") {
    BigReal s = BigReal::ratio(1, 2);
    BigReal r25 = abs(bigK(25, s) / bigK_asymptotic(25, s) - 1);
    BigReal r50 = abs(bigK(50, s) / bigK_asymptotic(50, s) - 1);
    BigReal r100 = abs(bigK(100, s) / bigK_asymptotic(100, s) - 1);
    CHECK(r50 < BigReal::ratio(1, 50));
    CHECK(r50 < r25);
    CHECK(r100 < r50);
  }
}

TEST_CASE("Ising t=1 limits") {
  WorkingPrecision::set_digits(50);
  CHECK(close(ising_t1_constant(0), BigReal(1), pow10(-45)));
  CHECK(close(ising_t1_constant(1), 2 / pi(), pow10(-44)));
  CHECK(close(ising_t1_constant(2), pow(2 / pi(), 2L) * BigReal::ratio(4, 3),
              pow10(-44)));
  SUBCASE("N = 0 expansion is constant") {
    CHECK(close(ising_t1_expansion(0, pow10(-3)), BigReal(1), pow10(-40)));
  }
  SUBCASE("sigma -> 0 merge of the generic expansion") {
    CHECK(sigma_zero_limit_check(1, pow10(-3), pow10(-6)) < pow10(-4));
    CHECK(sigma_zero_limit_check(0, pow10(-3), pow10(-6)) < pow10(-6));
  }
}

TEST_CASE("Toda-like equation") {
  WorkingPrecision::set_digits(50);
  SUBCASE("lambda = 0: quarter-root law closes the recursion") {
    CorrProvider provider = [](long, const BigReal& t) {
      return pow(1 - t, BigReal::ratio(1, 4));
    };
    CHECK(abs(toda_residual(1, BigReal::ratio(1, 2), provider)) < pow10(-25));
  }
  SUBCASE("theta providers at N = 1, lambda = 0.6") {
    BigReal lam("0.6");
    corr::FredholmConfig cfg;
    cfg.target_tol = pow10(-30);
    CorrProvider provider = [&](long n, const BigReal& t) {
      if (n <= 1) return corr::theta_corr(n, t, lam).value;
      return corr::fredholm_corr(n, t, lam, cfg).value;
    };
    CHECK(abs(toda_residual(1, BigReal::ratio(1, 2), provider)) < pow10(-8));
  }
  SUBCASE("Toeplitz provider at lambda = 1") {
    CorrProvider provider = [](long n, const BigReal& t) {
      return corr::toeplitz_corr(n, t).value;
    };
    CHECK(abs(toda_residual(1, BigReal::ratio(1, 4), provider)) < pow10(-10));
  }
}

TEST_CASE("section-4 identities") {
  WorkingPrecision::set_digits(50);
  SUBCASE("K ratio identity") {
    CHECK(abs(k_ratio_check(1, BigReal::ratio(1, 2))) < pow10(-40));
    CHECK(abs(k_ratio_check(3, BigReal::ratio(9, 10))) < pow10(-40));
    CHECK(abs(k_ratio_check(2, BigReal(0))) < pow10(-40));  // Toeplitz ratio at t=1
  }
  SUBCASE("shat recursion vanishes on the closed form") {
    CHECK(abs(shat_recurrence_residual(1, BigReal::ratio(1, 2))) < pow10(-40));
    for (long N = 1; N <= 20; ++N)
      CHECK(abs(shat_recurrence_residual(N, BigReal("0.37"))) < pow10(-40));
  }
  SUBCASE("recursion is sensitive to a 1% perturbation of shat") {
    long N = 1;
    BigReal sigma = BigReal::ratio(1, 2);
    BigReal sN = shat(N, sigma) * BigReal::ratio(101, 100);
    BigReal sNp = shat(N + 1, sigma), sNm = shat(N - 1, sigma);
    BigReal lhs = -sN * sigma * (1 - sigma) * (2 * N + sigma);
    BigReal rhs = (BigReal(N * N) - sigma * sigma / 4) *
                  (sNp * (2 * N + 2 + sigma) + sNm * (2 * N - 2 + sigma) -
                   2 * sN * (2 * N + sigma));
    CHECK(abs(lhs - rhs) > BigReal::ratio(1, 100));
  }
}

TEST_CASE("closed_form bundle") {
  WorkingPrecision::set_digits(50);
  ConnectionConstants c = closed_form(1, sqrt(BigReal(2)) / 2);
  CHECK(close(c.sigma, BigReal::ratio(1, 2), pow10(-44)));
  CHECK(close(c.shat, BigReal::ratio(12, 5), pow10(-44)));
  CHECK(close(c.s, BigReal::ratio(4, 5), pow10(-44)));
  CHECK(c.source == ConnectionConstants::Source::ClosedForm);
}
