#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icorr/linalg.hpp"
#include "icorr/quadrature.hpp"
#include "icorr/specialfn.hpp"

namespace icorr::corr {

enum class Method { Fredholm, Toeplitz, Theta, Algebraic, Auto };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& s);

enum class FredholmMode { TracePowers, LogDet };

/// Contour discretization settings for the Fredholm representation.
/// The admissible band is k < rho < 1: the weight branch points sit at z = k
/// (inner) and z = 1/k (outer), and the Cauchy links image the contour to
/// |z| = 1/rho. Defaults: rho = (1+k)/2, M chosen from the geometric error
/// rate max(k/rho, rho^2)^M against target_tol.
struct FredholmConfig {
  BigReal radius = BigReal(0);   // <= 0: use (1+k)/2
  long points = 0;               // 0: auto from target_tol
  long max_points = 1L << 16;
  FredholmMode mode = FredholmMode::LogDet;
  long lambda_series_cap = 12;   // n_max for TracePowers
  long compute_digits = 0;       // 0: working precision
  BigReal target_tol = BigReal(0);  // <= 0: 10^(-P/2)
};

struct Diagnostics {
  long quadrature_points = 0;
  std::string radius;
  long series_terms = 0;
  std::string note;
};

struct CorrelatorValue {
  BigReal value;
  BigReal est_error;
  Method method = Method::Auto;
  Diagnostics diag;
};

struct CorrelatorRequest {
  long N = 0;
  BigReal t;
  BigReal lambda;
  Method method = Method::Auto;
  long precision = 0;  // 0: current working precision
};

/// P(z) = (1-kz)^{1/2} (principal branch) and Q = 1/P. Throws BranchCutError
/// if 1-kz lands on the closed negative real axis.
BigComplex weight_P(const BigComplex& z, const BigReal& k);
BigComplex weight_Q(const BigComplex& z, const BigReal& k);

/// a_n = (1/2π)∫ e^{-inθ} [(1-k e^{-iθ})/(1-k e^{iθ})]^{1/2} dθ, adaptive
/// trapezoid; the result is real (imaginary residue checked against tol).
BigReal fourier_coeff(long n, const BigReal& k);

/// One-pass evaluation of a_n for n in [-nmax, nmax] on shared nodes.
std::vector<BigReal> fourier_coeff_block(long nmax, const BigReal& k,
                                         const BigReal& tol, long* points_used);

/// N x N Toeplitz determinant det[a_{i-j}] (lambda = 1); N = 0 gives 1.
CorrelatorValue toeplitz_corr(long N, const BigReal& t);

/// Nyström discretization of the composed two-variable operator of the
/// 2n-fold contour integrals: T = (D_Q G)(D_P G) with G[a,b] = 1/(1-z_a z_b)
/// and D carrying the quadrature weight, z^N, and the Q/P pair weights.
///
/// The node set is closed under conjugation and the kernel has real k, so T
/// commutes with the antiunitary J: (Jv)_a = conj(v_{M-a}). The factors
/// -i(D_Q G) and -i(D_P G) are J-real, which turns T into minus the product
/// of two REAL matrices in the conjugation-adapted basis (cos/sin
/// components). Everything downstream runs on that real form: traces and the
/// shifted determinant are real by construction, det(I + λ²T) =
/// det(I - λ² R_A R_B).
class FredholmOperator {
 public:
  FredholmOperator(long N, const BigReal& t, const FredholmConfig& cfg);

  /// R = R_A R_B, the real reduction of -T.
  const RMatrix& reduced_matrix() const { return R_; }
  long order() const { return N_; }
  const BigReal& t() const { return t_; }
  long points() const { return M_; }
  const BigReal& radius() const { return rho_; }
  /// Estimated one-term discretization error: rate^M.
  const BigReal& truncation() const { return truncation_; }
  /// Error model for derived values: truncation amplified by the trace size
  /// (measured amplification stays below M across the admissible band).
  BigReal est_error() const { return truncation_ * M_ + pow10(-(compute_digits_ - 10)); }
  long compute_digits() const { return compute_digits_; }

  /// Tr(T^n) (exactly real in the reduced form).
  BigReal trace_power(long n);

 private:
  const RMatrix& power(long p);
  long N_;
  BigReal t_;
  long M_ = 0;
  BigReal rho_;
  BigReal truncation_;
  long compute_digits_ = 0;
  RMatrix R_;
  std::vector<RMatrix> powers_;  // powers_[p] = R^{p+2} once formed
};

/// F_N^{(2n)} = (-1)^{n+1}/n · Tr(T^n).
BigReal fredholm_F2n(long N, const BigReal& t, long n, const FredholmConfig& cfg);

/// C^- via the Fredholm representation: (1-t)^{1/4} exp Σ λ^{2n} F^{(2n)}
/// (TracePowers) or (1-t)^{1/4} det(I + λ² T) (LogDet).
CorrelatorValue fredholm_corr(long N, const BigReal& t, const BigReal& lambda,
                              const FredholmConfig& cfg = FredholmConfig{});

/// Same, reusing an already-built operator (T does not depend on lambda, so
/// lambda sweeps share the expensive discretization).
CorrelatorValue fredholm_corr(FredholmOperator& op, const BigReal& lambda,
                              const FredholmConfig& cfg = FredholmConfig{});

/// Theta closed forms for N = 0, 1 with u = arccos(lambda). Above t = 0.99
/// the dual-nome (modular-identity) series are used.
CorrelatorValue theta_corr(long N, const BigReal& t, const BigReal& lambda);

/// Algebraic closed forms: lambda = cos(pi/4) with N in {0,1,2}; lambda =
/// cos(pi/3) with N = 0 (branch-tracked root of the degree-12 polynomial).
CorrelatorValue algebraic_corr(long N, const BigReal& t, const BigReal& lambda);

bool algebraic_supported(long N, const BigReal& lambda);

/// Coefficients c_1..c_order of C^-/(1-t)^{1/4} = 1 + Σ c_m t^m, extracted by
/// finite differencing Fredholm values at tiny t.
std::vector<BigReal> small_t_expansion(long N, const BigReal& lambda, long order);

/// Method dispatch; Auto = Theta (N<=1) -> Algebraic -> Toeplitz (λ=1) -> Fredholm.
CorrelatorValue eval(const CorrelatorRequest& req,
                     const FredholmConfig& cfg = FredholmConfig{});

}  // namespace icorr::corr
