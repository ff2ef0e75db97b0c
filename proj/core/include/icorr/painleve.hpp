#pragma once

#include <vector>

#include "icorr/correlators.hpp"
#include "icorr/stencil.hpp"

namespace icorr::pvi {

/// One sampled state of the sigma-form trajectory. branch_sign is the sign of
/// t(t-1)h'' — the square-root branch of the ODE solved for h''.
struct HState {
  BigReal t;
  BigReal h;
  BigReal hp;
  int branch_sign = 1;
};

enum class InitSource { LeadingTerm, FredholmSeeded };

struct SigmaTrajectory {
  std::vector<HState> states;
  long N = 0;
  BigReal lambda;
  InitSource init_source = InitSource::FredholmSeeded;
  BigReal max_residual;  // largest |ODE residual| sampled along the march
  long steps_accepted = 0;
  long steps_rejected = 0;
};

struct ConnectionFit {
  BigReal sigma_est;
  BigReal s_est;
  BigReal shat_est;
  BigReal K_est;
  bool K_available = false;
  bool degenerate = false;  // sigma pinned at an endpoint (lambda = 0 or 1)
  BigReal window_lo;        // x = 1-t range used
  BigReal window_hi;
  BigReal residual_norm;    // worst |model - h| over the window
  bool residual_ok = true;  // residual_norm under the 1e-3 quality threshold
};

/// h = t(t-1) (ln C)' - t/4 and its t-derivative, by 4th-order stencils on
/// ln(corr).
std::pair<BigReal, BigReal> h_from_corr(const RealFn& corr, const BigReal& t);

/// LHS - RHS of the sigma-form equation:
/// (t(t-1)h'')^2 + 4h'((t-1)h'-h-1/4)(th'-h) - N^2((t-1)h'-h)^2.
BigReal sigma_residual(const BigReal& t, const BigReal& h, const BigReal& hp,
                       const BigReal& hpp, long N);

/// The square of t(t-1)h'' solved from the ODE at (t,h,h').
BigReal hpp_radicand(const BigReal& t, const BigReal& h, const BigReal& hp, long N);

/// h'' = branch_sign sqrt(radicand)/(t(t-1)); small negative radicand is
/// clamped to zero, larger throws BranchError.
BigReal hpp_solve(const HState& state, long N);

/// March the sigma-form ODE from t0 to t1 with an embedded RKF7(8) pair.
/// Waypoints (if given) are hit exactly and appear among the states.
SigmaTrajectory integrate(long N, const BigReal& lambda, const BigReal& t0,
                          const BigReal& t1, InitSource init, const BigReal& tol,
                          const std::vector<BigReal>& waypoints = {});

/// Local t->1 model for h, x = 1-t:
/// -(1-σ²)/4 + (1-σ²)x/8 + s(1+σ)(2N+σ)x^{1-σ}/(16σ) - s^{-1}(1-σ)(2N-σ)x^{1+σ}/(16σ).
BigReal h_expansion_t1(const BigReal& x, const BigReal& sigma, const BigReal& s, long N);

/// Local t->1 model for the correlation:
/// K x^{σ²/4} [1 - (1-σ²)x/8 + ŝ(2N+σ)x^{1-σ}/(16σ) - ŝ^{-1}(2N-σ)x^{1+σ}/(16σ)].
BigReal corr_expansion_t1(const BigReal& x, const BigReal& sigma, const BigReal& shat,
                          const BigReal& K, long N);

/// Extract (σ, s, ŝ, K) from the trajectory tail: σ by iterated Richardson
/// extrapolation of sqrt(1+4h), s by least squares on the x^{1-σ} term, K by
/// dividing a closed-form correlator by the bracket model.
ConnectionFit fit_connection(const SigmaTrajectory& traj);

/// The t-values the fitter will sample (8 log-spaced x in
/// [max(1-t1, 1e-6), 1e-4]); pass these as waypoints to integrate().
std::vector<BigReal> fit_window_waypoints(const BigReal& t1);

}  // namespace icorr::pvi
