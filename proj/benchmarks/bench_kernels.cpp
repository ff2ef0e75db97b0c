#include <benchmark/benchmark.h>

#include "icorr/connection.hpp"
#include "icorr/correlators.hpp"
#include "icorr/painleve.hpp"

using namespace icorr;

namespace {

void BM_elliptic_K(benchmark::State& state) {
  WorkingPrecision::set_digits(state.range(0));
  BigReal k("0.8");
  for (auto _ : state) benchmark::DoNotOptimize(sf::elliptic_K(k));
}
BENCHMARK(BM_elliptic_K)->Arg(50)->Arg(100)->Arg(200);

void BM_theta3(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  sf::Nome nm = sf::nome(BigReal::ratio(state.range(0), 100));
  BigReal u("0.7");
  for (auto _ : state) benchmark::DoNotOptimize(sf::theta(3, u, nm.q));
}
BENCHMARK(BM_theta3)->Arg(50)->Arg(90)->Arg(99);

void BM_quad_circle(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  CircleQuadrature q = CircleQuadrature::make(BigReal("0.7"), state.range(0));
  auto f = [](const BigComplex& z) { return BigComplex(1) / z; };
  for (auto _ : state) benchmark::DoNotOptimize(quad_circle(f, q));
}
BENCHMARK(BM_quad_circle)->Arg(64)->Arg(256);

void BM_fredholm_build(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  BigReal t = BigReal::ratio(state.range(0), 100);
  corr::FredholmConfig cfg;
  cfg.points = state.range(1);
  for (auto _ : state) {
    corr::FredholmOperator op(0, t, cfg);
    benchmark::DoNotOptimize(op.points());
  }
}
BENCHMARK(BM_fredholm_build)->Args({50, 64})->Args({50, 128})->Args({80, 256});

void BM_fredholm_logdet(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  BigReal t("0.5"), lam("0.5");
  corr::FredholmConfig cfg;
  cfg.points = state.range(0);
  corr::FredholmOperator op(0, t, cfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(corr::fredholm_corr(op, lam, cfg).value);
}
BENCHMARK(BM_fredholm_logdet)->Arg(64)->Arg(128)->Arg(256);

void BM_toeplitz(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  BigReal t("0.25");
  for (auto _ : state)
    benchmark::DoNotOptimize(corr::toeplitz_corr(state.range(0), t).value);
}
BENCHMARK(BM_toeplitz)->Arg(2)->Arg(6);

void BM_theta_corr(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  BigReal t = BigReal::ratio(state.range(0), 1000);
  BigReal lam("0.5");
  for (auto _ : state) benchmark::DoNotOptimize(corr::theta_corr(0, t, lam).value);
}
BENCHMARK(BM_theta_corr)->Arg(500)->Arg(999);

void BM_rk_step_region(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  // one short integration leg: exercises the RHS + controller
  BigReal lam("0.5");
  for (auto _ : state) {
    pvi::SigmaTrajectory tr =
        pvi::integrate(0, lam, BigReal("0.2"), BigReal("0.3"),
                       pvi::InitSource::LeadingTerm, pow10(-18));
    benchmark::DoNotOptimize(tr.steps_accepted);
  }
}
BENCHMARK(BM_rk_step_region);

void BM_bigK_asymptotic(benchmark::State& state) {
  WorkingPrecision::set_digits(50);
  BigReal s = BigReal::ratio(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(conn::bigK_asymptotic(50, s));
}
BENCHMARK(BM_bigK_asymptotic);

}  // namespace

BENCHMARK_MAIN();
