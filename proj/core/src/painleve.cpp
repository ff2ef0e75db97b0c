#include "icorr/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace icorr::pvi {

std::pair<BigReal, BigReal> h_from_corr(const RealFn& corr, const BigReal& t) {
  auto logc = [&](const BigReal& s) { return log(corr(s)); };
  StencilPair d = central_derivative_pair(logc, t);
  BigReal h = t * (t - 1) * d.d1 - t / 4;
  BigReal hp = (2 * t - 1) * d.d1 + t * (t - 1) * d.d2 - BigReal::ratio(1, 4);
  return {h, hp};
}

BigReal sigma_residual(const BigReal& t, const BigReal& h, const BigReal& hp,
                       const BigReal& hpp, long N) {
  BigReal lhs1 = t * (t - 1) * hpp;
  BigReal e = (t - 1) * hp - h;
  BigReal quarter = BigReal::ratio(1, 4);
  return lhs1 * lhs1 + 4 * hp * (e - quarter) * (t * hp - h) - BigReal(N * N) * e * e;
}

BigReal hpp_radicand(const BigReal& t, const BigReal& h, const BigReal& hp, long N) {
  BigReal e = (t - 1) * hp - h;
  BigReal quarter = BigReal::ratio(1, 4);
  return BigReal(N * N) * e * e - 4 * hp * (e - quarter) * (t * hp - h);
}

BigReal hpp_solve(const HState& state, long N) {
  BigReal R = hpp_radicand(state.t, state.h, state.hp, N);
  BigReal tol = default_tolerance();
  if (R.sign() < 0) {
    if (R < -tol) throw BranchError("hpp_solve: radicand " + R.str(8) + " < -tol");
    R = BigReal(0);
  }
  BigReal denom = state.t * (state.t - 1);
  BigReal root = sqrt(R);
  return (state.branch_sign < 0 ? -root : root) / denom;
}

// ---------------------------------------------------------------------------
// Embedded Fehlberg 7(8) pair, exact rational tableau. The 8th-order solution
// is propagated; the 7th-order companion supplies the error estimate.
// ---------------------------------------------------------------------------

namespace {

struct Rkf78 {
  static constexpr int stages = 13;
  BigReal c[13];
  BigReal a[13][12];
  BigReal b7[13];
  BigReal b8[13];

  Rkf78() {
    auto R = [](long n, long d) { return BigReal::ratio(n, d); };
    static const long cn[13][2] = {{0, 1},  {2, 27}, {1, 9}, {1, 6}, {5, 12},
                                   {1, 2},  {5, 6},  {1, 6}, {2, 3}, {1, 3},
                                   {1, 1},  {0, 1},  {1, 1}};
    for (int i = 0; i < 13; ++i) c[i] = R(cn[i][0], cn[i][1]);
    for (int i = 0; i < 13; ++i)
      for (int j = 0; j < 12; ++j) a[i][j] = BigReal(0);
    a[1][0] = R(2, 27);
    a[2][0] = R(1, 36); a[2][1] = R(1, 12);
    a[3][0] = R(1, 24); a[3][2] = R(1, 8);
    a[4][0] = R(5, 12); a[4][2] = R(-25, 16); a[4][3] = R(25, 16);
    a[5][0] = R(1, 20); a[5][3] = R(1, 4); a[5][4] = R(1, 5);
    a[6][0] = R(-25, 108); a[6][3] = R(125, 108); a[6][4] = R(-65, 27);
    a[6][5] = R(125, 54);
    a[7][0] = R(31, 300); a[7][4] = R(61, 225); a[7][5] = R(-2, 9);
    a[7][6] = R(13, 900);
    a[8][0] = R(2, 1); a[8][3] = R(-53, 6); a[8][4] = R(704, 45);
    a[8][5] = R(-107, 9); a[8][6] = R(67, 90); a[8][7] = R(3, 1);
    a[9][0] = R(-91, 108); a[9][3] = R(23, 108); a[9][4] = R(-976, 135);
    a[9][5] = R(311, 54); a[9][6] = R(-19, 60); a[9][7] = R(17, 6);
    a[9][8] = R(-1, 12);
    a[10][0] = R(2383, 4100); a[10][3] = R(-341, 164); a[10][4] = R(4496, 1025);
    a[10][5] = R(-301, 82); a[10][6] = R(2133, 4100); a[10][7] = R(45, 82);
    a[10][8] = R(45, 164); a[10][9] = R(18, 41);
    a[11][0] = R(3, 205); a[11][5] = R(-6, 41); a[11][6] = R(-3, 205);
    a[11][7] = R(-3, 41); a[11][8] = R(3, 41); a[11][9] = R(6, 41);
    a[12][0] = R(-1777, 4100); a[12][3] = R(-341, 164); a[12][4] = R(4496, 1025);
    a[12][5] = R(-289, 82); a[12][6] = R(2193, 4100); a[12][7] = R(51, 82);
    a[12][8] = R(33, 164); a[12][9] = R(12, 41); a[12][11] = R(1, 1);
    for (int i = 0; i < 13; ++i) b7[i] = BigReal(0);
    b7[0] = R(41, 840); b7[5] = R(34, 105); b7[6] = R(9, 35); b7[7] = R(9, 35);
    b7[8] = R(9, 280); b7[9] = R(9, 280); b7[10] = R(41, 840);
    for (int i = 0; i < 13; ++i) b8[i] = BigReal(0);
    b8[5] = R(34, 105); b8[6] = R(9, 35); b8[7] = R(9, 35);
    b8[8] = R(9, 280); b8[9] = R(9, 280); b8[11] = R(41, 840); b8[12] = R(41, 840);
  }
};

using State2 = std::array<BigReal, 2>;

}  // namespace

SigmaTrajectory integrate(long N, const BigReal& lambda, const BigReal& t0,
                          const BigReal& t1, InitSource init, const BigReal& tol,
                          const std::vector<BigReal>& waypoints) {
  if (N < 0) throw DomainError("integrate: N must be >= 0");
  if (!(t0.sign() > 0 && t0 < t1 && t1 < BigReal(1)))
    throw DomainError("integrate: need 0 < t0 < t1 < 1");
  if (tol.sign() <= 0) throw DomainError("integrate: tol must be positive");
  long P = WorkingPrecision::digits();

  SigmaTrajectory traj;
  traj.N = N;
  traj.lambda = lambda;
  traj.init_source = init;
  traj.max_residual = BigReal(0);

  std::vector<BigReal> wps = waypoints;
  std::sort(wps.begin(), wps.end());
  wps.erase(std::remove_if(wps.begin(), wps.end(),
                           [&](const BigReal& w) { return w <= t0 || w >= t1; }),
            wps.end());
  wps.push_back(t1);

  // lambda = 0: h vanishes identically for every N.
  if (lambda.is_zero()) {
    traj.states.push_back({t0, BigReal(0), BigReal(0), 1});
    for (const BigReal& w : wps) traj.states.push_back({w, BigReal(0), BigReal(0), 1});
    return traj;
  }

  // --- initial data ---
  BigReal h0, hp0;
  if (init == InitSource::LeadingTerm) {
    // h -> -λ² t^{N+1} (1/2)_N (3/2)_N / (4 N! (N+1)!)
    BigReal num = sf::pochhammer(1, 2, N) * sf::pochhammer(3, 2, N);
    BigReal den = 4 * sf::pochhammer(BigReal(1), N) * sf::pochhammer(BigReal(1), N + 1);
    BigReal coeff = lambda * lambda * num / den;
    h0 = -coeff * pow(t0, N + 1);
    hp0 = BigReal(N + 1) * h0 / t0;
  } else {
    corr::FredholmConfig cfg;
    cfg.mode = corr::FredholmMode::LogDet;
    cfg.target_tol = pow10(-(P + 5));
    auto corr_fn = [&](const BigReal& s) {
      return corr::fredholm_corr(N, s, lambda, cfg).value;
    };
    auto pr = h_from_corr(corr_fn, t0);
    h0 = pr.first;
    hp0 = pr.second;
  }

  // Branch sign from a coarse second difference of h near t0.
  int branch_sign = 1;
  {
    BigReal delta = t0 / 8;
    BigReal hm, hp_l, hpp_est;
    if (init == InitSource::LeadingTerm) {
      BigReal num = sf::pochhammer(1, 2, N) * sf::pochhammer(3, 2, N);
      BigReal den = 4 * sf::pochhammer(BigReal(1), N) * sf::pochhammer(BigReal(1), N + 1);
      BigReal coeff = lambda * lambda * num / den;
      hpp_est = N >= 1 ? -coeff * BigReal((N + 1) * N) * pow(t0, N - 1) : BigReal(0);
    } else {
      corr::FredholmConfig cfg;
      cfg.mode = corr::FredholmMode::LogDet;
      cfg.target_tol = pow10(-(P + 5));
      auto corr_fn = [&](const BigReal& s) {
        return corr::fredholm_corr(N, s, lambda, cfg).value;
      };
      hm = h_from_corr(corr_fn, t0 - delta).first;
      hp_l = h_from_corr(corr_fn, t0 + delta).first;
      hpp_est = (hp_l - 2 * h0 + hm) / (delta * delta);
    }
    // h'' = sign*sqrt(R)/(t(t-1)) and t(t-1) < 0 on (0,1)
    if (hpp_est.sign() > 0) branch_sign = -1;
  }

  Rkf78 tab;
  auto rhs = [&](const BigReal& t, const State2& y, int bsign) -> State2 {
    HState s{t, y[0], y[1], bsign};
    return {y[1], hpp_solve(s, N)};
  };
  // tol is the target for the accumulated error; the per-step controller gets
  // a safety factor so the global drift stays within ~10 tol
  BigReal local_tol = tol / 1000;

  HState cur{t0, h0, hp0, branch_sign};
  traj.states.push_back(cur);
  size_t wp_idx = 0;

  BigReal hstep = min(BigReal::ratio(1, 100), (t1 - t0) / 10);
  BigReal hmin = pow10(-(P - 10));
  BigReal one_eighth = BigReal::ratio(1, 8);
  long max_steps = 2000000;

  State2 y{cur.h, cur.hp};
  BigReal t = cur.t;
  std::array<State2, 13> k;

  while (t < t1 && max_steps-- > 0) {
    while (wp_idx < wps.size() && wps[wp_idx] <= t) ++wp_idx;
    BigReal target = wp_idx < wps.size() ? wps[wp_idx] : t1;
    BigReal hcur = min(hstep, target - t);
    bool waypoint_hit = (hcur == target - t);

    bool stage_ok = true;
    State2 y8{BigReal(0), BigReal(0)}, y7{BigReal(0), BigReal(0)};
    try {
      for (int i = 0; i < 13; ++i) {
        State2 yi = y;
        for (int j = 0; j < i; ++j) {
          if (tab.a[i][j].is_zero()) continue;
          yi[0] += hcur * tab.a[i][j] * k[j][0];
          yi[1] += hcur * tab.a[i][j] * k[j][1];
        }
        k[i] = rhs(t + tab.c[i] * hcur, yi, cur.branch_sign);
      }
      y8 = y;
      y7 = y;
      for (int i = 0; i < 13; ++i) {
        if (!tab.b8[i].is_zero()) {
          y8[0] += hcur * tab.b8[i] * k[i][0];
          y8[1] += hcur * tab.b8[i] * k[i][1];
        }
        if (!tab.b7[i].is_zero()) {
          y7[0] += hcur * tab.b7[i] * k[i][0];
          y7[1] += hcur * tab.b7[i] * k[i][1];
        }
      }
    } catch (const BranchError&) {
      stage_ok = false;
    }

    if (stage_ok) {
      BigReal err(0);
      for (int d = 0; d < 2; ++d) {
        BigReal sc = local_tol + local_tol * max(abs(y[d]), abs(y8[d]));
        err = max(err, abs(y8[d] - y7[d]) / sc);
      }
      if (err <= BigReal(1)) {
        t = waypoint_hit ? target : t + hcur;  // land on waypoints exactly
        y = y8;
        cur = HState{t, y[0], y[1], cur.branch_sign};
        traj.states.push_back(cur);
        traj.steps_accepted++;
        try {
          BigReal res = abs(sigma_residual(t, y[0], y[1], hpp_solve(cur, N), N));
          traj.max_residual = max(traj.max_residual, res);
        } catch (const BranchError&) {
          // accepted state sits on a radicand zero; the next step deals with it
        }
        // step growth: 0.9 err^{-1/8}, clamped
        BigReal fac = err.is_zero() ? BigReal(5) : BigReal("0.9") * pow(err, -one_eighth);
        fac = min(BigReal(5), max(BigReal::ratio(1, 5), fac));
        hstep = hcur * fac;
        continue;
      }
      traj.steps_rejected++;
      BigReal fac = BigReal("0.9") * pow(err, -one_eighth);
      fac = min(BigReal(1), max(BigReal::ratio(1, 10), fac));
      hstep = hcur * fac;
    } else {
      traj.steps_rejected++;
      hstep = hcur / 4;
    }

    if (hstep < hmin) {
      // Re-anchor: step across a suspected radicand zero on a local Taylor
      // model built from the last accepted state, flipping the branch if the
      // predicted h'' calls for it.
      if (traj.states.size() < 2)
        throw IntegrationFailed("integrate: step underflow at t=" + t.str(12));
      const HState& prev = traj.states[traj.states.size() - 2];
      BigReal hpp_cur;
      try {
        hpp_cur = hpp_solve(cur, N);
      } catch (const BranchError&) {
        hpp_cur = BigReal(0);
      }
      BigReal hpp_prev;
      try {
        hpp_prev = hpp_solve(prev, N);
      } catch (const BranchError&) {
        hpp_prev = BigReal(0);
      }
      BigReal dt_prev = cur.t - prev.t;
      BigReal hppp = dt_prev.is_zero() ? BigReal(0) : (hpp_cur - hpp_prev) / dt_prev;
      bool anchored = false;
      BigReal jump = max(hmin * 100, hcur * 4);
      for (int attempt = 0; attempt < 8 && !anchored; ++attempt) {
        BigReal tc = min(t + jump, target);  // never jump across a waypoint
        if (tc >= t1 || tc <= t) break;
        BigReal h_pred = y[0] + jump * y[1] + jump * jump * hpp_cur / 2 +
                         jump * jump * jump * hppp / 6;
        BigReal hp_pred = y[1] + jump * hpp_cur + jump * jump * hppp / 2;
        BigReal R = hpp_radicand(tc, h_pred, hp_pred, N);
        if (R.sign() >= 0) {
          BigReal hpp_taylor = hpp_cur + jump * hppp;
          int sign_new = 1;
          // h'' = s sqrt(R)/(t(t-1)), t(t-1) < 0: s = -sign(h'')
          if (hpp_taylor.sign() > 0) sign_new = -1;
          t = tc;
          y = {h_pred, hp_pred};
          cur = HState{t, y[0], y[1], sign_new};
          traj.states.push_back(cur);
          traj.steps_accepted++;
          hstep = jump;
          anchored = true;
        }
        jump = jump * 2;
      }
      if (!anchored)
        throw IntegrationFailed(
            "integrate: branch re-anchoring failed near t=" + t.str(12));
    }
  }
  if (t < t1)
    throw IntegrationFailed("integrate: step budget exhausted before t1");
  return traj;
}

BigReal h_expansion_t1(const BigReal& x, const BigReal& sigma, const BigReal& s, long N) {
  if (sigma.sign() <= 0 || sigma >= BigReal(1))
    throw DegenerateExponent("h_expansion_t1: sigma must lie in (0,1)");
  BigReal s2 = sigma * sigma;
  BigReal xs = pow(x, 1 - sigma);
  BigReal xs2 = pow(x, 1 + sigma);
  return -(1 - s2) / 4 + (1 - s2) * x / 8 +
         s * (1 + sigma) * (2 * N + sigma) * xs / (16 * sigma) -
         (1 - sigma) * (2 * N - sigma) * xs2 / (16 * sigma * s);
}

BigReal corr_expansion_t1(const BigReal& x, const BigReal& sigma, const BigReal& shat,
                          const BigReal& K, long N) {
  if (sigma.sign() <= 0 || sigma >= BigReal(1))
    throw DegenerateExponent("corr_expansion_t1: sigma must lie in (0,1)");
  BigReal s2 = sigma * sigma;
  BigReal bracket = 1 - (1 - s2) * x / 8 +
                    shat * (2 * N + sigma) * pow(x, 1 - sigma) / (16 * sigma) -
                    (2 * N - sigma) * pow(x, 1 + sigma) / (16 * sigma * shat);
  return K * pow(x, s2 / 4) * bracket;
}

// ---------------------------------------------------------------------------
// Connection fit.
// ---------------------------------------------------------------------------

namespace {

// The 8 log-spaced x samples in [max(x_end, 1e-6), 1e-4], largest first.
// fit_connection and fit_window_waypoints must agree bitwise, so both go
// through here.
std::vector<BigReal> window_samples(const BigReal& x_end) {
  const int npts = 8;
  BigReal hi = pow10(-4);
  BigReal lo = max(x_end, pow10(-6));
  BigReal ratio = pow(lo / hi, BigReal::ratio(1, npts - 1));
  std::vector<BigReal> xs;
  xs.reserve(npts);
  for (int i = 0; i < npts; ++i) xs.push_back(hi * pow(ratio, static_cast<long>(i)));
  return xs;
}

// One Richardson level for samples on a geometric grid (x_{i+1} = r x_i,
// r < 1): removes the c x^p term exactly.
std::vector<BigReal> richardson_level(const std::vector<BigReal>& g, const BigReal& rp) {
  std::vector<BigReal> out;
  out.reserve(g.size() - 1);
  for (size_t i = 0; i + 1 < g.size(); ++i)
    out.push_back((g[i + 1] - rp * g[i]) / (1 - rp));
  return out;
}

std::vector<BigReal> exponent_ladder(const BigReal& sigma) {
  std::vector<BigReal> ps = {1 - sigma, 2 * (1 - sigma), BigReal(1), 1 + sigma,
                             2 - sigma};
  std::sort(ps.begin(), ps.end());
  std::vector<BigReal> out;
  for (const BigReal& p : ps) {
    if (p.sign() <= 0) continue;
    if (!out.empty() && p - out.back() < BigReal::ratio(1, 50)) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace

ConnectionFit fit_connection(const SigmaTrajectory& traj) {
  if (traj.states.empty()) throw FitFailed("fit_connection: empty trajectory");
  const BigReal& t_end = traj.states.back().t;
  BigReal x_end = 1 - t_end;
  if (x_end > pow10(-4))
    throw FitFailed("fit_connection: trajectory must reach 1-t <= 1e-4");

  ConnectionFit fit;
  fit.window_hi = pow10(-4);
  fit.window_lo = max(x_end, pow10(-6));

  // Gather the window samples from the recorded states.
  std::vector<BigReal> sample_x = window_samples(x_end);
  const int npts = static_cast<int>(sample_x.size());
  BigReal ratio = sample_x[1] / sample_x[0];
  std::vector<BigReal> xs, hs, ts;
  for (const BigReal& x : sample_x) {
    BigReal t = 1 - x;
    const HState* best = nullptr;
    BigReal best_d(10);
    for (const HState& s : traj.states) {
      BigReal d = abs(s.t - t);
      if (d < best_d) {
        best_d = d;
        best = &s;
      }
    }
    if (!best || best_d > x * pow10(-15))
      throw FitFailed("fit_connection: no trajectory state at window sample x=" +
                      x.str(8) + " (pass fit_window_waypoints to integrate)");
    xs.push_back(1 - best->t);
    ts.push_back(best->t);
    hs.push_back(best->h);
  }

  // sigma via sqrt(1+4h) extrapolated over the decreasing-x sequence.
  std::vector<BigReal> g;
  g.reserve(npts);
  for (const BigReal& h : hs) {
    BigReal arg = 1 + 4 * h;
    if (arg.sign() < 0) throw FitFailed("fit_connection: 1+4h negative in window");
    g.push_back(sqrt(arg));
  }
  const BigReal& r = ratio;
  BigReal sigma = g.back();
  for (int iter = 0; iter < 60; ++iter) {
    if (sigma >= BigReal("0.995") || sigma <= BigReal("0.005")) break;
    std::vector<BigReal> work = g;
    for (const BigReal& p : exponent_ladder(sigma)) {
      if (static_cast<long>(work.size()) < 3) break;
      work = richardson_level(work, pow(r, p));
    }
    BigReal next = work.back();
    if (abs(next - sigma) < pow10(-(WorkingPrecision::digits() / 2))) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  fit.sigma_est = sigma;

  if (sigma >= BigReal("0.995") || sigma <= BigReal("0.005")) {
    // Degenerate connection point (lambda -> 0 gives sigma = 1, lambda -> 1
    // gives sigma = 0); the x^{1±σ} exponents merge and the generic fit does
    // not apply. Report the endpoint; closed forms take over downstream.
    fit.degenerate = true;
    fit.sigma_est = sigma >= BigReal("0.995") ? BigReal(1) : BigReal(0);
    fit.s_est = BigReal(0);
    fit.shat_est = BigReal(0);
    fit.K_est = BigReal(0);
    fit.residual_norm = BigReal(0);
    return fit;
  }

  // s from the x^{1-sigma} coefficient of h + (1-σ²)/4 - (1-σ²)x/8.
  BigReal s2 = sigma * sigma;
  std::vector<BigReal> rho;
  rho.reserve(npts);
  for (int i = 0; i < npts; ++i)
    rho.push_back(hs[i] + (1 - s2) / 4 - (1 - s2) * xs[i] / 8);
  std::vector<BigReal> exps = exponent_ladder(sigma);
  std::vector<std::vector<BigReal>> cols;
  for (const BigReal& p : exps) {
    std::vector<BigReal> col;
    col.reserve(npts);
    for (const BigReal& x : xs) col.push_back(pow(x, p));
    cols.push_back(std::move(col));
  }
  std::vector<BigReal> coef = least_squares(cols, rho);
  BigReal A;
  {
    // column whose exponent is 1-sigma
    size_t idx = 0;
    BigReal bestd(10);
    for (size_t i = 0; i < exps.size(); ++i) {
      BigReal d = abs(exps[i] - (1 - sigma));
      if (d < bestd) {
        bestd = d;
        idx = i;
      }
    }
    A = coef[idx];
  }
  BigReal s_est = 16 * sigma * A / ((1 + sigma) * (2 * traj.N + sigma));
  if (s_est.sign() <= 0)
    throw FitFailed("fit_connection: nonpositive s estimate " + s_est.str(8));
  fit.s_est = s_est;
  fit.shat_est = s_est * (1 + sigma) / (1 - sigma);

  // residual of the fitted model over the window
  fit.residual_norm = BigReal(0);
  for (int i = 0; i < npts; ++i) {
    BigReal model = h_expansion_t1(xs[i], sigma, s_est, traj.N);
    fit.residual_norm = max(fit.residual_norm, abs(model - hs[i]));
  }
  fit.residual_ok = fit.residual_norm < pow10(-3);

  // K from a closed-form correlator over the smallest-x samples.
  bool have_closed = (traj.N <= 1) || corr::algebraic_supported(traj.N, traj.lambda);
  if (have_closed) {
    BigReal acc(0);
    int used = 0;
    for (int i = npts - 3; i < npts; ++i) {
      corr::CorrelatorValue cv =
          traj.N <= 1 ? corr::theta_corr(traj.N, ts[i], traj.lambda)
                      : corr::algebraic_corr(traj.N, ts[i], traj.lambda);
      BigReal bracket = corr_expansion_t1(xs[i], sigma, fit.shat_est, BigReal(1), traj.N);
      acc += cv.value / bracket;
      ++used;
    }
    fit.K_est = acc / used;
    fit.K_available = true;
  }
  return fit;
}

std::vector<BigReal> fit_window_waypoints(const BigReal& t1) {
  std::vector<BigReal> out;
  for (const BigReal& x : window_samples(1 - t1)) out.push_back(1 - x);
  return out;
}

}  // namespace icorr::pvi
