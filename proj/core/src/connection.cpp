#include "icorr/connection.hpp"

#include "icorr/painleve.hpp"
#include "icorr/specialfn.hpp"
#include "icorr/stencil.hpp"

namespace icorr::conn {

BigReal sigma_of_lambda(const BigReal& lambda) {
  if (lambda.sign() < 0 || lambda > BigReal(1))
    throw DomainError("sigma_of_lambda: need 0 <= lambda <= 1");
  return 2 * acos(lambda) / pi(lambda.precision_digits());
}

BigReal lambda_of_sigma(const BigReal& sigma) {
  if (sigma.sign() < 0 || sigma > BigReal(1))
    throw DomainError("lambda_of_sigma: need 0 <= sigma <= 1");
  return cos(pi(sigma.precision_digits()) * sigma / 2);
}

BigReal shat(long N, const BigReal& sigma) {
  if (N < 0) throw DomainError("shat: N must be >= 0");
  BigReal acc = pow(BigReal(16), sigma);
  for (long n = 1; n <= N; ++n) {
    BigReal half = sigma / (2 * n);
    acc *= (1 - half) / (1 + half);
  }
  return acc;
}

BigReal bigK(long N, const BigReal& sigma) {
  if (N < 0) throw DomainError("bigK: N must be >= 0");
  if (sigma.sign() < 0 || sigma > BigReal(1))
    throw DomainError("bigK: need 0 <= sigma <= 1");
  long P = sigma.precision_digits();
  if (sigma == BigReal(1)) return BigReal::ratio(1, 2);
  BigReal s2 = sigma * sigma;
  // sigma/sin(pi sigma/2) -> 2/pi as sigma -> 0
  BigReal kink = sigma.is_zero() ? 2 / pi(P) : sigma / sin(pi(P) * sigma / 2);
  BigReal acc = pow(BigReal(2), -s2) * pow(kink, N);
  for (long m = 1; m <= N - 1; ++m) {
    BigReal m2 = BigReal(4 * m * m);
    acc *= pow(1 - 1 / m2, m - N) * pow(1 - s2 / m2, N - m);
  }
  return acc;
}

BigReal s_from_shat(const BigReal& sigma, const BigReal& shat_val) {
  if (sigma == BigReal(1))
    throw DegenerateExponent("s_from_shat: sigma = 1 degenerates the x^{1±σ} pair");
  return shat_val * (1 - sigma) / (1 + sigma);
}

BigReal bigK_asymptotic(long N, const BigReal& sigma) {
  if (N < 1) throw DomainError("bigK_asymptotic: N must be >= 1");
  long P = sigma.precision_digits();
  BigReal s2 = sigma * sigma;
  BigReal gamma = euler_gamma_const(P);
  BigReal expo = (s2 - 1) / 4;
  // exp(+(σ²-1)(1+γ)/4): the +(…) sign is forced by the harmonic-sum limit
  // sum_{m<N} σ²/4m -> (σ²/4)(ln N + γ); the finite product then satisfies
  // K/asym -> 1 (checked to N=200).
  BigReal head = pow(BigReal(N), expo) * pow(BigReal(2), -s2) * exp(expo * (1 + gamma));
  // log of the two infinite products, reorganized termwise:
  // sum_{i>=2} zeta(2i-1) (a^i - b^i)/i with a = σ²/4, b = 1/4.
  BigReal a = s2 / 4, b = BigReal::ratio(1, 4);
  BigReal tol = pow10(-(P + 5));
  BigReal logp(0);
  BigReal ai = a, bi = b;
  for (unsigned long i = 2; i < 4000; ++i) {
    ai *= a;
    bi *= b;
    BigReal term = zeta_int(2 * i - 1, P) * (ai - bi) / BigReal(static_cast<long>(i));
    logp += term;
    if (abs(term) < tol && max(ai, bi) < tol) break;
  }
  return head * exp(logp);
}

BigReal ising_t1_constant(long N) {
  if (N < 0) throw DomainError("ising_t1_constant: N must be >= 0");
  long P = WorkingPrecision::digits();
  BigReal acc = pow(2 / pi(P), N);
  for (long m = 1; m <= N; ++m)
    acc *= pow(1 - BigReal::ratio(1, 4 * m * m), m - N);
  return acc;
}

BigReal ising_t1_expansion(long N, const BigReal& x) {
  if (x.sign() <= 0 || x >= BigReal(1))
    throw DomainError("ising_t1_expansion: need 0 < x < 1");
  BigReal bracket = 1 - BigReal(N) * x * (log(x) - log(BigReal(16)) + sf::harmonic(N)) / 4;
  return ising_t1_constant(N) * bracket;
}

BigReal toda_residual(long N, const BigReal& t, const CorrProvider& provider) {
  if (N < 1) throw DomainError("toda_residual: N must be >= 1");
  auto logc = [&](const BigReal& s) { return log(provider(N, s)); };
  StencilPair d = central_derivative_pair(logc, t);
  // (1-t)^2 d/dt [ t (ln C)' ] = (1-t)^2 ((ln C)' + t (ln C)'')
  BigReal lhs = (1 - t) * (1 - t) * (d.d1 + t * d.d2) + BigReal(N * N);
  BigReal cn = provider(N, t);
  BigReal ratio = provider(N + 1, t) * provider(N - 1, t) / (cn * cn);
  return lhs - (BigReal(N * N) - BigReal::ratio(1, 4)) * ratio;
}

BigReal k_ratio_check(long N, const BigReal& sigma) {
  if (N < 1) throw DomainError("k_ratio_check: N must be >= 1");
  BigReal num = bigK(N + 1, sigma) * bigK(N - 1, sigma);
  BigReal den = bigK(N, sigma);
  BigReal target = (BigReal(N * N) - sigma * sigma / 4) /
                   (BigReal(N * N) - BigReal::ratio(1, 4));
  return num / (den * den) - target;
}

BigReal shat_recurrence_residual(long N, const BigReal& sigma) {
  if (N < 1) throw DomainError("shat_recurrence_residual: N must be >= 1");
  BigReal sN = shat(N, sigma), sNp = shat(N + 1, sigma), sNm = shat(N - 1, sigma);
  BigReal lhs = -sN * sigma * (1 - sigma) * (2 * N + sigma);
  BigReal rhs = (BigReal(N * N) - sigma * sigma / 4) *
                (sNp * (2 * N + 2 + sigma) + sNm * (2 * N - 2 + sigma) -
                 2 * sN * (2 * N + sigma));
  return lhs - rhs;
}

BigReal sigma_zero_limit_check(long N, const BigReal& x, const BigReal& sigma_small) {
  if (sigma_small.sign() <= 0 || sigma_small > pow10(-4))
    throw DomainError("sigma_zero_limit_check: need 0 < sigma_small <= 1e-4");
  BigReal generic =
      pvi::corr_expansion_t1(x, sigma_small, shat(N, sigma_small), bigK(N, sigma_small), N);
  BigReal ising = ising_t1_expansion(N, x);
  return abs(generic / ising - 1);
}

ConnectionConstants closed_form(long N, const BigReal& lambda) {
  ConnectionConstants c;
  c.N = N;
  c.sigma = sigma_of_lambda(lambda);
  c.shat = shat(N, c.sigma);
  c.bigK = bigK(N, c.sigma);
  c.s = c.sigma == BigReal(1) ? BigReal(0) : s_from_shat(c.sigma, c.shat);
  c.source = ConnectionConstants::Source::ClosedForm;
  return c;
}

}  // namespace icorr::conn
