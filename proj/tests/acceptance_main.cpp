// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Budgets are wall-clock on a desktop-class 2-core machine.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "icorr/verify.hpp"

using namespace icorr;

namespace {

int g_failures = 0;

struct Criterion {
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;
  double seconds = 0;
  double budget_seconds = 0;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

void report(Criterion& c) {
  if (c.budget_seconds > 0 && c.seconds > c.budget_seconds) {
    c.pass = false;
    c.notes.push_back("runtime " + std::to_string(c.seconds) + "s over budget " +
                      std::to_string(c.budget_seconds) + "s");
  }
  std::printf("%s %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.seconds);
  for (const auto& n : c.notes) std::printf("       %s\n", n.c_str());
  std::fflush(stdout);
  if (!c.pass) ++g_failures;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void from_report(Criterion& c, const verify::Report& r) {
  for (const auto& cs : r.cases)
    c.require(cs.pass, cs.inputs + ": expected " + cs.expected + ", got " + cs.got);
}

// 1. closed-form constants regression, each to 1e-25
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "1 closed-form constants (sigma, shat, K, brackets)"};
  c.budget_seconds = 1.0;
  BigReal tol = pow10(-25);
  auto chk = [&](const std::string& what, const BigReal& got, const BigReal& want) {
    c.require(abs(got - want) <= tol,
              what + ": got " + got.str(30) + ", want " + want.str(30));
  };
  BigReal half = BigReal::ratio(1, 2);
  chk("sigma(cos pi/4)", conn::sigma_of_lambda(sqrt(BigReal(2)) / 2), half);
  chk("sigma(1/2)", conn::sigma_of_lambda(half), BigReal::ratio(2, 3));
  for (long N = 0; N <= 6; ++N) {
    chk("shat(" + std::to_string(N) + ",1)", conn::shat(N, BigReal(1)),
        BigReal::ratio(16, 2 * N + 1));
    chk("K(" + std::to_string(N) + ",1)", conn::bigK(N, BigReal(1)), half);
  }
  chk("K(0,1/2)", conn::bigK(0, half), pow(BigReal(2), BigReal::ratio(-1, 4)));
  chk("K(1,1/2)", conn::bigK(1, half), pow(BigReal(2), BigReal::ratio(-3, 4)));
  chk("K(2,1/2)", conn::bigK(2, half),
      pow(BigReal(2), BigReal::ratio(-5, 4)) * BigReal::ratio(5, 4));
  chk("K(0,2/3)", conn::bigK(0, BigReal::ratio(2, 3)),
      pow(BigReal(2), BigReal::ratio(-4, 9)));
  // bracket coefficients of the t->1 expansion:
  // x^{1-σ}: shat(N,σ)(2N+σ)/(16σ); x: -(1-σ²)/8; x^{1+σ}: -(2N-σ)/(16σ shat)
  auto xcoef = [&](long N, const BigReal& s) {
    return conn::shat(N, s) * (2 * N + s) / (16 * s);
  };
  chk("bracket 1/4", xcoef(0, half), BigReal::ratio(1, 4));
  chk("bracket 3/4", xcoef(1, half), BigReal::ratio(3, 4));
  chk("bracket 21/20", xcoef(2, half), BigReal::ratio(21, 20));
  chk("bracket -3/32", -(1 - half * half) / 8, BigReal::ratio(-3, 32));
  BigReal tt = BigReal::ratio(2, 3);
  chk("bracket 2^{-4/3}", xcoef(0, tt), pow(BigReal(2), BigReal::ratio(-4, 3)));
  chk("bracket -5/72", -(1 - tt * tt) / 8, BigReal::ratio(-5, 72));
  chk("bracket 2^{1/3}/128", -(0 * 2 - tt) / (16 * tt * conn::shat(0, tt)),
      pow(BigReal(2), BigReal::ratio(1, 3)) / 128);
  c.seconds = elapsed(t0);
  report(c);
}

// 2. section-4 identities vanish to 1e-40 on N in 1..20 x sigma grid
void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "2 Toda-derived identities (K ratio, shat recursion)"};
  c.budget_seconds = 1.0;
  BigReal bound = pow10(-40);
  for (long N = 1; N <= 20; ++N)
    for (int i = 1; i <= 9; ++i) {
      BigReal s = BigReal::ratio(i, 10);
      c.require(abs(conn::k_ratio_check(N, s)) <= bound,
                "k_ratio N=" + std::to_string(N) + " sigma=" + s.str(2));
      c.require(abs(conn::shat_recurrence_residual(N, s)) <= bound,
                "shat_rec N=" + std::to_string(N) + " sigma=" + s.str(2));
    }
  c.seconds = elapsed(t0);
  report(c);
}

// 3. cross-method agreement at 1e-10
void criterion3() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "3 cross-method agreement (theta/Toeplitz/algebraic vs Fredholm)"};
  c.budget_seconds = 600.0;
  from_report(c, verify::run_suite("crossmethod"));
  c.seconds = elapsed(t0);
  report(c);
}

// 4. Fredholm small-t calibration and series coefficients
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "4 small-t calibration (leading coefficients 1/8 5/64 3/128 5/512)"};
  c.budget_seconds = 300.0;
  from_report(c, verify::run_suite("smallt"));
  c.seconds = elapsed(t0);
  report(c);
}

// 5. connection pipeline for the three reference cases
void criterion5() {
  Criterion c{.name = "5 connection pipeline (integrate 0.05 -> 1-1e-5, fit)"};
  auto t0 = std::chrono::steady_clock::now();
  struct Case {
    long N;
    BigReal lambda;
    const char* label;
  };
  std::vector<Case> cases = {{0, sqrt(BigReal(2)) / 2, "N=0 cos(pi/4)"},
                             {1, sqrt(BigReal(2)) / 2, "N=1 cos(pi/4)"},
                             {0, BigReal::ratio(1, 2), "N=0 cos(pi/3)"}};
  for (const auto& cs : cases) {
    auto tc = std::chrono::steady_clock::now();
    verify::PipelineResult res = verify::run_connection_pipeline(
        cs.N, cs.lambda, BigReal::ratio(1, 20), 1 - pow10(-5), pow10(-25));
    double dt = elapsed(tc);
    c.require(res.sigma_err <= pow10(-4),
              std::string(cs.label) + " sigma_err " + res.sigma_err.str(6));
    c.require(res.shat_rel_err <= pow10(-3),
              std::string(cs.label) + " shat_rel " + res.shat_rel_err.str(6));
    c.require(res.K_rel_err <= pow10(-3),
              std::string(cs.label) + " K_rel " + res.K_rel_err.str(6));
    c.require(dt < 600.0, std::string(cs.label) + " runtime over 10 min");
  }
  c.seconds = elapsed(t0);
  report(c);
}

// 6. Toda residuals
void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "6 Toda-like equation residuals (<= 1e-8)"};
  c.budget_seconds = 600.0;
  from_report(c, verify::run_suite("toda"));
  c.seconds = elapsed(t0);
  report(c);
}

// 7. sigma -> 0 merge and the lambda = 0 law
void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "7 sigma->0 merge and lambda=0 quarter-root law"};
  c.require(conn::sigma_zero_limit_check(1, pow10(-3), pow10(-6)) <= pow10(-4),
            "sigma-zero merge at N=1");
  long P = WorkingPrecision::digits();
  for (int i = 1; i <= 9; ++i) {
    BigReal t = BigReal::ratio(i, 10);
    BigReal expect = pow(1 - t, BigReal::ratio(1, 4));
    c.require(abs(corr::theta_corr(0, t, BigReal(0)).value - expect) <=
                  pow10(-(P - 5)),
              "theta lambda=0 t=" + t.str(2));
    c.require(abs(corr::fredholm_corr(0, t, BigReal(0)).value - expect) <=
                  pow10(-(P - 5)),
              "fredholm lambda=0 t=" + t.str(2));
  }
  c.seconds = elapsed(t0);
  report(c);
}

// 8. large-N asymptotics of K
void criterion8() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "8 K(N;sigma) large-N asymptotics"};
  c.budget_seconds = 10.0;
  BigReal s = BigReal::ratio(1, 2);
  BigReal r50 = conn::bigK(50, s) / conn::bigK_asymptotic(50, s);
  BigReal r100 = conn::bigK(100, s) / conn::bigK_asymptotic(100, s);
  c.require(r50 >= BigReal("0.98") && r50 <= BigReal("1.02"),
            "ratio at N=50: " + r50.str(12));
  c.require(abs(r100 - 1) < abs(r50 - 1), "N=100 not closer than N=50");
  c.seconds = elapsed(t0);
  report(c);
}

// 9. ODE residual property for every closed-form correlator
void criterion9() {
  auto t0 = std::chrono::steady_clock::now();
  Criterion c{.name = "9 sigma-form residual <= 1e-18 for closed-form correlators"};
  auto residual_of = [&](const RealFn& corr, const BigReal& t, long N) {
    auto [h, hp] = pvi::h_from_corr(corr, t);
    auto lc = [&](const BigReal& s) { return log(corr(s)); };
    auto h_of = [&](const BigReal& s) {
      return s * (s - 1) * central_derivative(lc, s, 1) - s / 4;
    };
    BigReal hpp = central_derivative(h_of, t, 2, pow10(-6));
    return abs(pvi::sigma_residual(t, h, hp, hpp, N));
  };
  for (long N : {0L, 1L}) {
    for (const char* lam : {"0.2", "0.5", "0.8"}) {
      BigReal lambda(lam);
      RealFn corr = [N, lambda](const BigReal& t) {
        return corr::theta_corr(N, t, lambda).value;
      };
      for (int i = 1; i <= 9; ++i) {
        BigReal t = BigReal::ratio(i, 10);
        BigReal r = residual_of(corr, t, N);
        c.require(r <= pow10(-18), "theta N=" + std::to_string(N) + " lam=" +
                                       std::string(lam) + " t=" + t.str(2) +
                                       " residual " + r.str(4));
      }
    }
  }
  // algebraic cases
  {
    BigReal lam = sqrt(BigReal(2)) / 2;
    for (long N : {0L, 1L, 2L}) {
      RealFn corr = [N, lam](const BigReal& t) {
        return corr::algebraic_corr(N, t, lam).value;
      };
      for (int i = 1; i <= 9; i += 2) {
        BigReal t = BigReal::ratio(i, 10);
        BigReal r = residual_of(corr, t, N);
        c.require(r <= pow10(-18), "algebraic N=" + std::to_string(N) +
                                       " t=" + t.str(2) + " residual " + r.str(4));
      }
    }
  }
  c.seconds = elapsed(t0);
  report(c);
}

}  // namespace

int main() {
  WorkingPrecision::set_digits(50);
  std::printf("acceptance suite: lambda-generalized Ising correlations\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf(g_failures == 0 ? "ALL CRITERIA PASS\n"
                              : "%d CRITERIA FAILED\n",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
