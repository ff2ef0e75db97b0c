#pragma once

#include <functional>
#include <vector>

#include "icorr/bigcomplex.hpp"

namespace icorr {

/// Process-wide cap on worker threads used by matrix kernels and grid sweeps.
/// Results are bitwise independent of this setting (static row partitioning,
/// fixed per-entry evaluation order).
void set_max_threads(int n);
int max_threads();

/// Dense row-major complex matrix at a fixed precision.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(long rows, long cols, mpfr_prec_t bits);

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  mpfr_prec_t precision_bits() const { return bits_; }

  BigComplex& at(long i, long j) { return a_[i * cols_ + j]; }
  const BigComplex& at(long i, long j) const { return a_[i * cols_ + j]; }

  /// Scale row i by s, in place, for all i (diagonal left-multiply).
  void scale_rows(const std::vector<BigComplex>& s);

 private:
  long rows_ = 0, cols_ = 0;
  mpfr_prec_t bits_ = 64;
  std::vector<BigComplex> a_;
};

/// C = A·B, deterministic under any thread count.
CMatrix matmul(const CMatrix& A, const CMatrix& B);

/// Dense row-major real matrix at a fixed precision.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(long rows, long cols, mpfr_prec_t bits);

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  mpfr_prec_t precision_bits() const { return bits_; }

  BigReal& at(long i, long j) { return a_[i * cols_ + j]; }
  const BigReal& at(long i, long j) const { return a_[i * cols_ + j]; }

 private:
  long rows_ = 0, cols_ = 0;
  mpfr_prec_t bits_ = 64;
  std::vector<BigReal> a_;
};

RMatrix matmul(const RMatrix& A, const RMatrix& B);
BigReal trace(const RMatrix& A);
BigReal trace_product(const RMatrix& P, const RMatrix& Q);
/// det(I + c·A) by LU with partial pivoting, A untouched.
BigReal lu_det_shifted(const RMatrix& A, const BigReal& c);

BigComplex trace(const CMatrix& A);

/// Tr(P·Q) in O(n^2) without forming the product.
BigComplex trace_product(const CMatrix& P, const CMatrix& Q);

/// Determinant via LU with partial pivoting at the matrix's precision.
/// A column with no usable pivot yields 0 (singular), not an error.
BigComplex lu_det(CMatrix A);

/// det(I + c·A) without modifying the caller's copy of A.
BigComplex lu_det_shifted(const CMatrix& A, const BigComplex& c);

/// Run fn(i) for i in [begin, end) across the worker pool.
void parallel_for(long begin, long end, const std::function<void(long)>& fn);

/// Small dense real solve (Gaussian elimination with partial pivoting);
/// throws PrecisionExhausted on a singular system.
std::vector<BigReal> solve_dense(std::vector<std::vector<BigReal>> A,
                                 std::vector<BigReal> b);

/// Least squares via normal equations: minimizes ||X c - y||_2 for a column
/// list X (each column a vector of the same length as y).
std::vector<BigReal> least_squares(const std::vector<std::vector<BigReal>>& columns,
                                   const std::vector<BigReal>& y);

}  // namespace icorr
