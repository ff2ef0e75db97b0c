#include "icorr/correlators.hpp"

#include <cmath>

namespace icorr::corr {

std::string method_name(Method m) {
  switch (m) {
    case Method::Fredholm: return "fredholm";
    case Method::Toeplitz: return "toeplitz";
    case Method::Theta: return "theta";
    case Method::Algebraic: return "algebraic";
    case Method::Auto: return "auto";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& s) {
  if (s == "fredholm") return Method::Fredholm;
  if (s == "toeplitz") return Method::Toeplitz;
  if (s == "theta") return Method::Theta;
  if (s == "algebraic") return Method::Algebraic;
  if (s == "auto") return Method::Auto;
  return std::nullopt;
}

BigComplex weight_P(const BigComplex& z, const BigReal& k) {
  BigComplex w(1 - k * z.re(), -(k * z.im()));
  if (w.im().is_zero() && w.re().sign() <= 0)
    throw BranchCutError("weight_P: 1-kz on the branch cut; contour radius invalid");
  return sqrt(w);
}

BigComplex weight_Q(const BigComplex& z, const BigReal& k) {
  BigReal one = make_with_bits(z.precision_bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  return BigComplex(one) / weight_P(z, k);
}

// ---------------------------------------------------------------------------
// Toeplitz side: Fourier coefficients of [(1-k/z)/(1-kz)]^{1/2} on |z| = 1.
// On the unit circle the symbol is e^{-i phi} with phi = arg(1 - k e^{i θ}),
// so a_n = (1/2π)∫ cos(nθ + phi) dθ: all arithmetic stays real.
// ---------------------------------------------------------------------------

namespace {

// One trapezoid level: a_n for n in [-nmax, nmax], plus the imaginary residue
// of the n = n_probe complex sum (for the realness contract).
std::vector<BigReal> fourier_level(long nmax, const BigReal& k, long M,
                                   long n_probe, BigReal* imag_residue) {
  long dim = 2 * nmax + 1;
  std::vector<BigReal> acc(dim, BigReal(0));
  BigReal imag_acc(0);
  BigReal two_pi = 2 * pi(k.precision_digits());
  BigReal invM = BigReal(1) / BigReal(M);
  BigReal tiny = pow10(-(2 * k.precision_digits()));
  for (long m = 0; m < M; ++m) {
    BigReal theta = two_pi * BigReal(m) * invM;
    BigReal c1 = cos(theta), s1 = sin(theta);
    BigReal wr = 1 - k * c1, wi = -(k * s1);
    BigReal wa = hypot(wr, wi);
    BigReal cphi, sphi;
    if (wa < tiny) {
      // k = 1, θ = 0: symbol endpoint; both one-sided limits of the
      // integrand average to zero, the trapezoid endpoint value.
      continue;
    }
    cphi = wr / wa;
    sphi = wi / wa;
    // cos(nθ), sin(nθ) by recurrence.
    BigReal cn(1), sn(0);
    for (long n = 0; n <= nmax; ++n) {
      // a_n term: cos(nθ + φ); a_{-n}: cos(nθ - φ)
      BigReal cc = cn * cphi, ss = sn * sphi;
      acc[nmax + n] += cc - ss;
      if (n > 0) acc[nmax - n] += cc + ss;
      if (n == n_probe && imag_residue)
        imag_acc -= sn * cphi + cn * sphi;  // -sin(nθ + φ)
      BigReal cnn = cn * c1 - sn * s1;
      sn = sn * c1 + cn * s1;
      cn = cnn;
    }
  }
  for (auto& a : acc) a *= invM;
  if (imag_residue) *imag_residue = imag_acc * invM;
  return acc;
}

}  // namespace

std::vector<BigReal> fourier_coeff_block(long nmax, const BigReal& k,
                                         const BigReal& tol, long* points_used) {
  if (k.sign() < 0 || k > BigReal(1))
    throw DomainError("fourier_coeff: need 0 <= k <= 1");
  long M = 64;
  std::vector<BigReal> prev = fourier_level(nmax, k, M, -1, nullptr);
  long cap = 1L << 16;
  while (2 * M <= cap) {
    M *= 2;
    std::vector<BigReal> cur = fourier_level(nmax, k, M, -1, nullptr);
    BigReal delta(0);
    for (size_t i = 0; i < cur.size(); ++i) delta = max(delta, abs(cur[i] - prev[i]));
    if (delta < tol) {
      if (points_used) *points_used = M;
      return cur;
    }
    prev = std::move(cur);
  }
  throw NoConvergence("fourier_coeff_block: quadrature cap reached (k close to 1?)");
}

BigReal fourier_coeff(long n, const BigReal& k) {
  if (k.sign() < 0 || k > BigReal(1))
    throw DomainError("fourier_coeff: need 0 <= k <= 1");
  long nmax = std::abs(n);
  BigReal tol = k < BigReal(1) ? pow10(-(WorkingPrecision::digits() - 8))
                               : pow10(-10);  // kinked symbol at k = 1
  long M = 64;
  BigReal imag(0);
  std::vector<BigReal> prev = fourier_level(nmax, k, M, nmax, &imag);
  long cap = 1L << 16;
  while (2 * M <= cap) {
    M *= 2;
    std::vector<BigReal> cur = fourier_level(nmax, k, M, nmax, &imag);
    long idx = n >= 0 ? nmax + n : nmax - (-n);
    BigReal delta = abs(cur[idx] - prev[idx]);
    if (delta < tol) {
      if (abs(imag) > max(tol * 100, pow10(-(WorkingPrecision::digits() - 10))))
        throw InternalError("fourier_coeff: imaginary residue above tolerance");
      return cur[idx];
    }
    prev = std::move(cur);
  }
  throw NoConvergence("fourier_coeff: quadrature cap reached");
}

CorrelatorValue toeplitz_corr(long N, const BigReal& t) {
  if (N < 0) throw DomainError("toeplitz_corr: N must be >= 0");
  if (t.sign() < 0 || t >= BigReal(1)) throw DomainError("toeplitz_corr: need 0 <= t < 1");
  CorrelatorValue out;
  out.method = Method::Toeplitz;
  if (N == 0) {
    out.value = BigReal(1);  // empty determinant
    out.est_error = BigReal(0);
    out.diag.note = "empty determinant";
    return out;
  }
  long P = WorkingPrecision::digits();
  BigReal k = sqrt(t);
  BigReal tol = pow10(-(P - 6));
  long used = 0;
  std::vector<BigReal> a = fourier_coeff_block(N - 1, k, tol, &used);
  CMatrix A(N, N, WorkingPrecision::bits());
  for (long i = 0; i < N; ++i)
    for (long j = 0; j < N; ++j) A.at(i, j) = BigComplex(a[(N - 1) + (i - j)]);
  BigComplex det = lu_det(std::move(A));
  out.value = det.re();
  out.est_error = tol * (2 * N) + pow10(-(P - 6));
  out.diag.quadrature_points = used;
  if (out.value.sign() <= 0 || out.value > 1 + out.est_error)
    throw InternalError("toeplitz_corr: value escaped (0, 1]");
  return out;
}

// ---------------------------------------------------------------------------
// Fredholm operator discretization.
// ---------------------------------------------------------------------------

FredholmOperator::FredholmOperator(long N, const BigReal& t, const FredholmConfig& cfg) {
  if (N < 0) throw DomainError("FredholmOperator: N must be >= 0");
  if (t.sign() < 0 || t >= BigReal(1))
    throw DomainError("FredholmOperator: need 0 <= t < 1");
  long P = cfg.compute_digits > 0 ? cfg.compute_digits : WorkingPrecision::digits();
  t_ = t;
  ScopedPrecision guard(P);
  N_ = N;
  BigReal k = sqrt(widen(t, P));
  BigReal rho = cfg.radius.sign() > 0 ? widen(cfg.radius, P) : (1 + k) / 2;
  if (rho <= k || rho >= BigReal(1))
    throw BranchCutError("FredholmOperator: contour radius must satisfy k < rho < 1");
  rho_ = rho;
  BigReal target = cfg.target_tol.sign() > 0 ? widen(cfg.target_tol, P)
                                             : pow10(-(P / 2));
  BigReal rate = max(k / rho, rho * rho);
  long M = cfg.points;
  if (M <= 0) {
    // rate^M <= target, even, floor 64, small safety margin
    double lr = std::log(rate.to_double());
    double lt = std::log(target.to_double());
    if (lr >= 0) throw BranchCutError("FredholmOperator: degenerate contour rate");
    M = static_cast<long>(std::ceil(lt / lr)) + 8;
    if (M < 64) M = 64;
    M += M % 2;
    if (M > cfg.max_points)
      throw NoConvergence("FredholmOperator: required quadrature size " +
                          std::to_string(M) + " exceeds cap " +
                          std::to_string(cfg.max_points));
  }
  M_ = M;
  truncation_ = pow(rate, M);
  compute_digits_ = P;

  CircleQuadrature q = CircleQuadrature::make(rho, M);
  // Node factors: dQ = w z^N Q(z)Q(1/z) on odd slots, dP = w z^N P(z)P(1/z)
  // on even slots; the extra -i flattens the quadrature weight iz/M into
  // z/M, making the factors J-real.
  std::vector<BigComplex> dQ, dP;
  dQ.reserve(M);
  dP.reserve(M);
  BigReal one = make_with_bits(WorkingPrecision::bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  BigReal invM = BigReal(1) / BigReal(M);
  for (long a = 0; a < M; ++a) {
    const BigComplex& z = q.nodes[a];
    BigComplex zinv = BigComplex(one) / z;
    BigComplex pp = weight_P(z, k) * weight_P(zinv, k);
    BigComplex qq = BigComplex(one) / pp;
    BigComplex base = pow(z, N + 1) * invM;  // -i * (i z / M) * z^N
    dQ.push_back(base * qq);
    dP.push_back(base * pp);
  }
  // Real reduction: with J(v)_a = conj(v_{M-a}), the matrices
  // X[a,b] = d[a]/(1 - z_a z_b) satisfy JXJ = X. In the basis
  // {e_0, u_a = e_a + e_{M-a}, e_{M/2}, w_a = i(e_a - e_{M-a})} coordinates
  // are (Re at node a, Im at node a), so the real form reads off the Re/Im
  // parts of the column action.
  long H = M / 2;
  auto cos_index = [&](long a) { return a; };          // a in 0..H
  auto sin_index = [&](long a) { return H + a; };      // a in 1..H-1
  auto fill_real = [&](RMatrix& R, const std::vector<BigComplex>& d) {
    parallel_for(0, H + 1, [&](long a) {
      // rows: cos at a (0..H), sin at a (1..H-1)
      for (long b = 0; b <= H; ++b) {
        // column: action on u_b (or e_b at the self-paired nodes)
        BigComplex s = d[a] / (BigComplex(one) - q.nodes[a] * q.nodes[b]);
        if (b != 0 && b != H) {
          long bp = M - b;
          s += d[a] / (BigComplex(one) - q.nodes[a] * q.nodes[bp]);
        }
        R.at(cos_index(a), cos_index(b)) = s.re();
        if (a != 0 && a != H) R.at(sin_index(a), cos_index(b)) = s.im();
      }
      for (long b = 1; b <= H - 1; ++b) {
        // column: action on w_b = i(e_b - e_{M-b}); multiply by i in place
        long bp = M - b;
        BigComplex diff = d[a] / (BigComplex(one) - q.nodes[a] * q.nodes[b]) -
                          d[a] / (BigComplex(one) - q.nodes[a] * q.nodes[bp]);
        R.at(cos_index(a), sin_index(b)) = -diff.im();
        if (a != 0 && a != H) R.at(sin_index(a), sin_index(b)) = diff.re();
      }
    });
  };
  RMatrix RA(M, M, WorkingPrecision::bits());
  RMatrix RB(M, M, WorkingPrecision::bits());
  fill_real(RA, dQ);
  fill_real(RB, dP);
  R_ = matmul(RA, RB);
}

const RMatrix& FredholmOperator::power(long p) {
  // powers_[i] holds R^{i+2}
  if (p == 1) return R_;
  while (static_cast<long>(powers_.size()) + 1 < p) {
    long next = static_cast<long>(powers_.size()) + 2;
    const RMatrix& half = next == 2 ? R_ : powers_[next - 3];
    powers_.push_back(matmul(R_, half));
  }
  return powers_[p - 2];
}

BigReal FredholmOperator::trace_power(long n) {
  if (n < 1) throw DomainError("trace_power: n must be >= 1");
  // T = -(R as real form): Tr(T^n) = (-1)^n Tr(R^n)
  BigReal tr;
  if (n == 1) {
    tr = trace(R_);
  } else {
    long a = (n + 1) / 2, b = n - a;
    const RMatrix& pa = power(a);  // builds the cache; power(b) below must not
    const RMatrix& pb = power(b);  // reallocate under pa (b <= a)
    tr = trace_product(pa, pb);
  }
  if (n % 2 != 0) tr = -tr;
  return tr;
}

BigReal fredholm_F2n(long N, const BigReal& t, long n, const FredholmConfig& cfg) {
  if (n < 1) throw DomainError("fredholm_F2n: n must be >= 1");
  FredholmOperator op(N, t, cfg);
  BigReal tr = op.trace_power(n);
  BigReal f = tr / n;
  if (n % 2 == 0) f = -f;
  return f;
}

namespace {

BigReal quarter_root_prefactor(const BigReal& t) {
  return pow(1 - t, BigReal::ratio(1, 4));
}

}  // namespace

CorrelatorValue fredholm_corr(long N, const BigReal& t, const BigReal& lambda,
                              const FredholmConfig& cfg) {
  if (lambda.sign() < 0 || lambda > BigReal(1))
    throw DomainError("fredholm_corr: need 0 <= lambda <= 1");
  long P = WorkingPrecision::digits();
  if (lambda.is_zero()) {
    CorrelatorValue out;
    out.method = Method::Fredholm;
    out.value = quarter_root_prefactor(t);
    out.est_error = pow10(-(P - 2));
    out.diag.note = "lambda = 0: exact quarter-root law";
    return out;
  }
  if (t.is_zero()) {
    CorrelatorValue out;
    out.method = Method::Fredholm;
    out.value = BigReal(1);
    out.est_error = BigReal(0);
    out.diag.note = "t = 0: all methods give 1";
    return out;
  }
  FredholmOperator op(N, t, cfg);
  return fredholm_corr(op, lambda, cfg);
}

CorrelatorValue fredholm_corr(FredholmOperator& op, const BigReal& lambda,
                              const FredholmConfig& cfg) {
  if (lambda.sign() < 0 || lambda > BigReal(1))
    throw DomainError("fredholm_corr: need 0 <= lambda <= 1");
  long P = WorkingPrecision::digits();
  const BigReal& t = op.t();
  CorrelatorValue out;
  out.method = Method::Fredholm;
  if (lambda.is_zero()) {
    out.value = quarter_root_prefactor(t);
    out.est_error = pow10(-(P - 2));
    out.diag.note = "lambda = 0: exact quarter-root law";
    return out;
  }
  long computeP = cfg.compute_digits > 0 ? cfg.compute_digits : P;
  out.diag.quadrature_points = op.points();
  out.diag.radius = op.radius().str(12);
  BigReal lam2 = lambda * lambda;

  BigReal v, est;
  if (cfg.mode == FredholmMode::LogDet) {
    ScopedPrecision guard(computeP);
    // T = -R in the conjugation-adapted real basis
    v = lu_det_shifted(op.reduced_matrix(), widen(-lam2, computeP));
    if (v.sign() <= 0) throw InternalError("fredholm_corr: non-positive determinant");
    est = op.est_error();
    out.diag.note = "logdet";
  } else {
    ScopedPrecision guard(computeP);
    BigReal tol = cfg.target_tol.sign() > 0 ? (BigReal(1) * cfg.target_tol)
                                            : pow10(-(computeP / 2));
    BigReal acc(0);
    BigReal lam_pow = BigReal(1);
    BigReal prev_mag(0);
    long used = 0;
    bool converged = false;
    for (long n = 1; n <= cfg.lambda_series_cap; ++n) {
      lam_pow *= lam2;
      BigReal f = op.trace_power(n) / n;
      if (n % 2 == 0) f = -f;
      BigReal term = lam_pow * f;
      acc += term;
      used = n;
      BigReal mag = abs(term);
      if (n > 1 && mag > prev_mag && mag > tol)
        throw NoConvergence("fredholm_corr: lambda-series terms not decreasing",
                            mag.str(8), prev_mag.str(8));
      prev_mag = mag;
      if (mag < tol / 10) {
        converged = true;
        break;
      }
    }
    if (!converged && prev_mag > tol)
      throw NoConvergence("fredholm_corr: lambda-series cap reached", prev_mag.str(8),
                          tol.str(8));
    v = exp(acc);
    est = op.est_error() + prev_mag;
    out.diag.series_terms = used;
    out.diag.note = "trace-powers";
  }
  out.value = quarter_root_prefactor(t) * widen(v, P);
  out.est_error = widen(est, P);
  if (out.value.sign() <= 0 || out.value > 1 + max(out.est_error, pow10(-20)))
    throw InternalError("fredholm_corr: value escaped (0, 1]");
  return out;
}

// ---------------------------------------------------------------------------
// Theta closed forms (N = 0, 1).
// ---------------------------------------------------------------------------

namespace {

// sum 2 q^{(n+1/2)^2} (2n+1) U_{2n}(lambda) with U_m the Chebyshev polynomials
// of the second kind: U_{2n}(cos u) = sin((2n+1)u)/sin(u). This is
// -theta2'(u)/sin(u) continued termwise through u = 0.
BigReal theta2_ratio_series(const BigReal& lambda, const BigReal& q) {
  BigReal tol = pow10(-(q.precision_digits() + 5));
  BigReal acc = make_with_bits(q.precision_bits());
  BigReal p = sqrt(sqrt(q));
  BigReal step = q * q;
  BigReal mul = step;
  BigReal u_even(1);           // U_{2n}
  BigReal u_odd = 2 * lambda;  // U_{2n+1}
  for (long n = 0; n < 100000; ++n) {
    acc += p * BigReal(2 * n + 1) * u_even;
    // |U_m| <= m+1 bounds the tail check
    if (p * BigReal((2 * n + 1) * (2 * n + 1)) < tol) break;
    BigReal u_next = 2 * lambda * u_odd - u_even;  // U_{2n+2}
    u_odd = 2 * lambda * u_next - u_odd;           // U_{2n+3}
    u_even = u_next;
    p = p * mul;
    mul = mul * step;
  }
  return 2 * acc;
}

}  // namespace

CorrelatorValue theta_corr(long N, const BigReal& t, const BigReal& lambda) {
  if (N != 0 && N != 1) throw DomainError("theta_corr: N must be 0 or 1");
  if (t.sign() <= 0 || t >= BigReal(1)) throw DomainError("theta_corr: need 0 < t < 1");
  if (lambda.sign() < 0 || lambda > BigReal(1))
    throw DomainError("theta_corr: need 0 <= lambda <= 1");
  long P = WorkingPrecision::digits();
  sf::Nome nm = sf::nome(t);
  BigReal u = acos(lambda);
  CorrelatorValue out;
  out.method = Method::Theta;
  out.est_error = pow10(-(P - 4));

  bool dual = t > BigReal::ratio(99, 100);
  if (!dual) {
    if (N == 0) {
      out.value = sf::theta(3, u, nm.q) / sf::theta(3, BigReal(0), nm.q);
      out.diag.note = "theta3 ratio";
    } else {
      BigReal num = theta2_ratio_series(lambda, nm.q);
      BigReal th3 = sf::theta(3, BigReal(0), nm.q);
      out.value = num / (sf::theta(2, BigReal(0), nm.q) * th3 * th3);
      out.diag.note = "theta2' ratio (termwise through u=0)";
    }
    return out;
  }
  // Dual-nome regime: modular identities push the series to q~ = e^{-pi K/K'},
  // which stays small as t -> 1.
  BigReal c = nm.K / nm.Kprime;
  BigReal qd = exp(-pi(P) * c);
  BigReal piP = pi(P);
  if (N == 0) {
    BigReal v = c * u;
    BigReal E = exp(-(c * u * u) / piP);
    out.value = E * sf::theta3_imag(v, qd) / sf::theta3_imag(BigReal(0), qd);
    out.diag.note = "dual-nome theta3";
    return out;
  }
  BigReal th4i0 = sf::theta4_imag(BigReal(0), qd);
  BigReal th3i0 = sf::theta3_imag(BigReal(0), qd);
  BigReal den = th4i0 * th3i0 * th3i0;
  BigReal KpK = nm.Kprime / nm.K;
  if (u.is_zero()) {
    BigReal bracket = -(2 * c / piP) * th4i0 + c * c * sf::theta4_imag_dv2(BigReal(0), qd);
    out.value = -(KpK * bracket) / den;
  } else {
    BigReal v = c * u;
    BigReal E = exp(-(c * u * u) / piP);
    BigReal bracket = -(2 * c * u / piP) * sf::theta4_imag(v, qd) +
                      c * sf::theta4_imag_dv(v, qd);
    out.value = -(KpK * E * bracket) / (sin(u) * den);
  }
  out.diag.note = "dual-nome theta2'";
  return out;
}

// ---------------------------------------------------------------------------
// Algebraic closed forms.
// ---------------------------------------------------------------------------

namespace {

bool near(const BigReal& x, const BigReal& y) { return abs(x - y) < pow10(-12); }

BigReal cos_pi_over_4() { return sqrt(BigReal(2)) / 2; }

}  // namespace

bool algebraic_supported(long N, const BigReal& lambda) {
  if (near(lambda, cos_pi_over_4()) && N >= 0 && N <= 2) return true;
  if (near(lambda, BigReal::ratio(1, 2)) && N == 0) return true;
  return false;
}

namespace {

// Branch-tracked real root of 16C^12 - 16C^9 + 8t(1-t)C^3 + t(1-t) = 0,
// continued from C(0) = 1 in steps of 1/64 with Newton polishing. The curve
// has a branch point over t = 1/2 (s = t(1-t) peaks there and the C(t),
// C(1-t) sheets collide, so p'(root) -> 0): the polish step falls back to a
// quadratic (double-root-capable) update and the predictor is a secant from
// the last two states, which stays on the decreasing sheet across t = 1/2.
std::pair<BigReal, BigReal> polynomial_branch_root(const BigReal& t_target) {
  long P = WorkingPrecision::digits();
  BigReal tol_dc = pow10(-(P - 5));
  BigReal tol_p = pow10(-(P - 6));
  auto poly = [](const BigReal& C, const BigReal& s) {
    BigReal C3 = C * C * C;
    BigReal C9 = C3 * C3 * C3;
    return 16 * C9 * C3 - 16 * C9 + 8 * s * C3 + s;
  };
  auto dpoly = [](const BigReal& C, const BigReal& s) {
    BigReal C2 = C * C;
    BigReal C8 = pow(C2, 4L);
    return 192 * C8 * C2 * C - 144 * C8 + 24 * s * C2;
  };
  auto ddpoly = [](const BigReal& C, const BigReal& s) {
    BigReal C2 = C * C;
    BigReal C7 = pow(C2, 3L) * C;
    return 2112 * C7 * C2 * C - 1152 * C7 + 48 * s * C;
  };
  auto polish = [&](BigReal C, const BigReal& s) {
    BigReal prev_dc(1);
    for (int it = 0; it < 120; ++it) {
      BigReal p = poly(C, s);
      BigReal dp = dpoly(C, s);
      BigReal ddp = ddpoly(C, s);
      BigReal dc;
      BigReal disc = dp * dp - 2 * p * ddp;
      if (disc.sign() >= 0 && !(abs(dp) > 4 * sqrt(abs(p * ddp)))) {
        // near-double root: quadratic step, denominator of largest magnitude
        BigReal root = sqrt(disc);
        BigReal d1 = dp + root, d2 = dp - root;
        BigReal den = abs(d1) >= abs(d2) ? d1 : d2;
        if (den.is_zero()) throw BranchLost("polynomial root: degenerate step");
        dc = 2 * p / den;
      } else {
        if (dp.is_zero()) throw BranchLost("polynomial root: zero derivative");
        dc = p / dp;
      }
      C -= dc;
      if (abs(dc) < tol_dc) return std::pair<BigReal, BigReal>{C, abs(dc)};
      // double-root stall: the increment bottoms out at the sqrt of the
      // rounding noise while |p| collapses; accept there
      if (abs(p) < tol_p && abs(dc) >= prev_dc / 2)
        return std::pair<BigReal, BigReal>{C, abs(dc)};
      prev_dc = abs(dc);
    }
    throw BranchLost("polynomial root: polish did not converge");
  };
  BigReal C(1);
  BigReal C_prev = C;
  BigReal step = BigReal::ratio(1, 64);
  BigReal tcur(0), tprev(0);
  BigReal dc_final(0);
  while (tcur < t_target) {
    BigReal tnext = min(tcur + step, t_target);
    BigReal s = tnext * (1 - tnext);
    BigReal pred = C;
    if (tcur > tprev) pred = C + (C - C_prev) / (tcur - tprev) * (tnext - tcur);
    auto [Cnew, dc_last] = polish(pred, s);
    BigReal guard = max(BigReal::ratio(1, 5), 4 * abs(C - C_prev));
    if (abs(Cnew - C) > guard)
      throw BranchLost("polynomial root: continuation jumped branches near t=" +
                       tnext.str(8));
    C_prev = C;
    tprev = tcur;
    C = Cnew;
    tcur = tnext;
    dc_final = dc_last;
  }
  return {C, dc_final};
}

}  // namespace

CorrelatorValue algebraic_corr(long N, const BigReal& t, const BigReal& lambda) {
  if (!algebraic_supported(N, lambda))
    throw DomainError("algebraic_corr: (lambda, N) outside the supported set "
                      "{cos(pi/4), N=0..2} u {cos(pi/3), N=0}");
  if (t.sign() < 0 || t >= BigReal(1)) throw DomainError("algebraic_corr: need 0 <= t < 1");
  long P = WorkingPrecision::digits();
  CorrelatorValue out;
  out.method = Method::Algebraic;
  out.est_error = pow10(-(P - 4));
  if (near(lambda, cos_pi_over_4())) {
    BigReal x = 1 - t;
    BigReal sx = sqrt(x);
    BigReal x16 = pow(x, BigReal::ratio(1, 16));
    BigReal quarter = BigReal::ratio(1, 4);
    if (N == 0) {
      out.value = pow(BigReal(2), -quarter) * x16 * pow(1 + sx, quarter);
    } else if (N == 1) {
      out.value = pow(BigReal(2), -3 * quarter) * x16 * pow(1 + sx, 3 * quarter);
    } else {
      out.value = pow(BigReal(2), -5 * quarter) * x16 * pow(1 + sx, 5 * quarter) *
                  (5 - sx) / 4;
    }
    out.diag.note = "closed form, sigma = 1/2";
    return out;
  }
  auto [root, dc_last] = polynomial_branch_root(t);
  out.value = root;
  out.est_error = max(out.est_error, 10 * dc_last);
  out.diag.note = "branch-tracked root, sigma = 2/3";
  return out;
}

// ---------------------------------------------------------------------------
// Small-t expansion by finite differencing.
// ---------------------------------------------------------------------------

namespace {

// Solve the small Vandermonde system sum_m c_m (j tau)^m = rhs_j.
std::vector<BigReal> expansion_at_scale(long N, const BigReal& lambda, long order,
                                        const BigReal& tau) {
  FredholmConfig cfg;
  cfg.mode = FredholmMode::LogDet;
  cfg.target_tol = pow10(-(WorkingPrecision::digits() + 5));
  std::vector<std::vector<BigReal>> A(order, std::vector<BigReal>(order, BigReal(0)));
  std::vector<BigReal> b(order, BigReal(0));
  for (long j = 1; j <= order; ++j) {
    BigReal tj = BigReal(j) * tau;
    CorrelatorValue cv = fredholm_corr(N, tj, lambda, cfg);
    BigReal g = cv.value / pow(1 - tj, BigReal::ratio(1, 4));
    b[j - 1] = g - 1;
    BigReal p(1);
    for (long m = 1; m <= order; ++m) {
      p *= tj;
      A[j - 1][m - 1] = p;
    }
  }
  return solve_dense(std::move(A), std::move(b));
}

}  // namespace

std::vector<BigReal> small_t_expansion(long N, const BigReal& lambda, long order) {
  if (order < N + 1)
    throw DomainError("small_t_expansion: order must be >= N+1 to reach the "
                      "leading coefficient");
  long P = WorkingPrecision::digits();
  long tau_exp = std::max<long>(8, P / 6);
  BigReal tau = pow10(-tau_exp);
  std::vector<BigReal> c = expansion_at_scale(N, lambda, order, tau);
  std::vector<BigReal> c2 = expansion_at_scale(N, lambda, order, 2 * tau);
  // Differencing noise scales like tau^{-m}; agreement between the two scales
  // bounds it. Truncation from t^{order+1} scales like tau, also captured.
  for (long m = 0; m < order; ++m) {
    BigReal est = abs(c[m] - c2[m]);
    if (est > pow10(-6) && est > abs(c[m]) / 2)
      throw PrecisionExhausted("small_t_expansion: noise " + est.str(6) +
                               " swamps coefficient " + std::to_string(m + 1));
  }
  return c;
}

CorrelatorValue eval(const CorrelatorRequest& req, const FredholmConfig& cfg) {
  std::optional<ScopedPrecision> guard;
  if (req.precision > 0) guard.emplace(req.precision);
  const BigReal& t = req.t;
  const BigReal& lam = req.lambda;
  if (t.sign() < 0 || t >= BigReal(1)) throw DomainError("eval: need 0 <= t < 1");
  if (lam.sign() < 0 || lam > BigReal(1)) throw DomainError("eval: need 0 <= lambda <= 1");
  bool lam_is_one = near(lam, BigReal(1));
  switch (req.method) {
    case Method::Theta:
      return theta_corr(req.N, t, lam);
    case Method::Toeplitz:
      if (!lam_is_one)
        throw DomainError("eval: Toeplitz method requires lambda = 1");
      return toeplitz_corr(req.N, t);
    case Method::Algebraic:
      return algebraic_corr(req.N, t, lam);
    case Method::Fredholm:
      return fredholm_corr(req.N, t, lam, cfg);
    case Method::Auto:
      break;
  }
  if (t.is_zero()) {
    CorrelatorValue out;
    out.value = BigReal(1);
    out.est_error = BigReal(0);
    out.method = Method::Auto;
    out.diag.note = "t = 0: exact";
    return out;
  }
  if (req.N <= 1) return theta_corr(req.N, t, lam);
  if (algebraic_supported(req.N, lam)) return algebraic_corr(req.N, t, lam);
  if (lam_is_one) return toeplitz_corr(req.N, t);
  return fredholm_corr(req.N, t, lam, cfg);
}

}  // namespace icorr::corr
