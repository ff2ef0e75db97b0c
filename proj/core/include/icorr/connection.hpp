#pragma once

#include <functional>

#include "icorr/bigreal.hpp"

namespace icorr::conn {

/// The connection data attached to one (N, lambda): sigma = (2/π) arccos λ,
/// the t->1 amplitude shat, the normalization K, and the h-expansion
/// amplitude s = shat (1-σ)/(1+σ).
struct ConnectionConstants {
  BigReal sigma;
  BigReal shat;
  BigReal bigK;
  BigReal s;
  long N = 0;
  enum class Source { ClosedForm, Fitted } source = Source::ClosedForm;
};

BigReal sigma_of_lambda(const BigReal& lambda);
BigReal lambda_of_sigma(const BigReal& sigma);

/// shat(N, σ) = 16^σ ∏_{n=1}^N (1 - σ/2n)/(1 + σ/2n).
BigReal shat(long N, const BigReal& sigma);

/// K(N; σ) = 2^{-σ²} (σ/sin(πσ/2))^N ∏_{m=1}^{N-1}(1-1/4m²)^{m-N}
///           ∏_{m=1}^{N-1}(1-σ²/4m²)^{N-m}; σ -> 0 and σ = 1 by their limits.
BigReal bigK(long N, const BigReal& sigma);

/// s = shat (1-σ)/(1+σ), from matching the x^{1±σ} orders of the h- and
/// correlation expansions at t = 1. σ = 1 degenerates.
BigReal s_from_shat(const BigReal& sigma, const BigReal& shat);

/// Large-N limit: N^{(σ²-1)/4} 2^{-σ²} e^{-(σ²-1)(1+γ)/4} times the two
/// convergent products, whose logs sum exactly to
/// Σ_{i>=2} ζ(2i-1)((σ²/4)^i - (1/4)^i)/i.
BigReal bigK_asymptotic(long N, const BigReal& sigma);

/// C(N, t=1; 1) = (2/π)^N ∏_{m=1}^N (1 - 1/4m²)^{m-N}.
BigReal ising_t1_constant(long N);

/// C(N,1)[1 - (N/4) x (ln x - ln 16 + H_N)].
BigReal ising_t1_expansion(long N, const BigReal& x);

/// Correlator source for the Toda residual: provider(N, t) -> C^-(N, t; λ).
using CorrProvider = std::function<BigReal(long, const BigReal&)>;

/// (1-t)² d/dt[t d/dt ln C(N)] + N² - (N²-1/4) C(N+1)C(N-1)/C(N)².
BigReal toda_residual(long N, const BigReal& t, const CorrProvider& provider);

/// K(N+1)K(N-1)/K(N)² - (N²-σ²/4)/(N²-1/4).
BigReal k_ratio_check(long N, const BigReal& sigma);

/// -ŝ(N)σ(1-σ)(2N+σ) - (N²-σ²/4)[ŝ(N+1)(2N+2+σ) + ŝ(N-1)(2N-2+σ) - 2ŝ(N)(2N+σ)].
BigReal shat_recurrence_residual(long N, const BigReal& sigma);

/// Relative gap between the generic t->1 expansion at tiny σ and the Ising
/// (σ=0) logarithmic expansion: the x^{1±σ} pair must merge into the
/// (N/4)x(ln x - ln 16 + H_N) structure.
BigReal sigma_zero_limit_check(long N, const BigReal& x, const BigReal& sigma_small);

/// Closed-form bundle for (N, lambda).
ConnectionConstants closed_form(long N, const BigReal& lambda);

}  // namespace icorr::conn
