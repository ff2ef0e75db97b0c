#include "icorr/linalg.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace icorr {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = hardware_concurrency
}

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n > 0) return n;
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(long begin, long end, const std::function<void(long)>& fn) {
  long n = end - begin;
  if (n <= 0) return;
  int nt = max_threads();
  if (nt <= 1 || n == 1) {
    for (long i = begin; i < end; ++i) fn(i);
    return;
  }
  if (nt > n) nt = static_cast<int>(n);
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  long chunk = (n + nt - 1) / nt;
  auto run = [&](long lo, long hi) {
    for (long i = lo; i < hi && i < end; ++i) fn(i);
  };
  for (int t = 1; t < nt; ++t)
    pool.emplace_back(run, begin + t * chunk, begin + (t + 1) * chunk);
  run(begin, begin + chunk);
  for (auto& th : pool) th.join();
}

CMatrix::CMatrix(long rows, long cols, mpfr_prec_t bits)
    : rows_(rows), cols_(cols), bits_(bits) {
  a_.reserve(rows * cols);
  for (long i = 0; i < rows * cols; ++i)
    a_.emplace_back(make_with_bits(bits), make_with_bits(bits));
}

void CMatrix::scale_rows(const std::vector<BigComplex>& s) {
  for (long i = 0; i < rows_; ++i)
    for (long j = 0; j < cols_; ++j) at(i, j) *= s[i];
}

CMatrix matmul(const CMatrix& A, const CMatrix& B) {
  if (A.cols() != B.rows()) throw DomainError("matmul dimension mismatch");
  CMatrix C(A.rows(), B.cols(), A.precision_bits());
  long n = A.cols(), bc = B.cols();
  parallel_for(0, A.rows(), [&](long i) {
    mpfr_t t;
    mpfr_init2(t, A.precision_bits());
    for (long k = 0; k < n; ++k) {
      mpfr_srcptr ar = A.at(i, k).re().raw();
      mpfr_srcptr ai = A.at(i, k).im().raw();
      if (mpfr_zero_p(ar) && mpfr_zero_p(ai)) continue;
      for (long j = 0; j < bc; ++j) {
        mpfr_srcptr br = B.at(k, j).re().raw();
        mpfr_srcptr bi = B.at(k, j).im().raw();
        mpfr_ptr cr = C.at(i, j).re().raw();
        mpfr_ptr ci = C.at(i, j).im().raw();
        mpfr_mul(t, ar, br, MPFR_RNDN);
        mpfr_add(cr, cr, t, MPFR_RNDN);
        mpfr_mul(t, ai, bi, MPFR_RNDN);
        mpfr_sub(cr, cr, t, MPFR_RNDN);
        mpfr_mul(t, ar, bi, MPFR_RNDN);
        mpfr_add(ci, ci, t, MPFR_RNDN);
        mpfr_mul(t, ai, br, MPFR_RNDN);
        mpfr_add(ci, ci, t, MPFR_RNDN);
      }
    }
    mpfr_clear(t);
  });
  return C;
}

RMatrix::RMatrix(long rows, long cols, mpfr_prec_t bits)
    : rows_(rows), cols_(cols), bits_(bits) {
  a_.reserve(rows * cols);
  for (long i = 0; i < rows * cols; ++i) a_.emplace_back(make_with_bits(bits));
}

RMatrix matmul(const RMatrix& A, const RMatrix& B) {
  if (A.cols() != B.rows()) throw DomainError("matmul dimension mismatch");
  RMatrix C(A.rows(), B.cols(), A.precision_bits());
  long n = A.cols(), bc = B.cols();
  parallel_for(0, A.rows(), [&](long i) {
    mpfr_t t;
    mpfr_init2(t, A.precision_bits());
    for (long k = 0; k < n; ++k) {
      mpfr_srcptr a = A.at(i, k).raw();
      if (mpfr_zero_p(a)) continue;
      for (long j = 0; j < bc; ++j) {
        mpfr_mul(t, a, B.at(k, j).raw(), MPFR_RNDN);
        mpfr_ptr c = C.at(i, j).raw();
        mpfr_add(c, c, t, MPFR_RNDN);
      }
    }
    mpfr_clear(t);
  });
  return C;
}

BigReal trace(const RMatrix& A) {
  BigReal acc = make_with_bits(A.precision_bits());
  for (long i = 0; i < A.rows(); ++i) acc += A.at(i, i);
  return acc;
}

BigReal trace_product(const RMatrix& P, const RMatrix& Q) {
  if (P.cols() != Q.rows() || P.rows() != Q.cols())
    throw DomainError("trace_product dimension mismatch");
  BigReal acc = make_with_bits(P.precision_bits());
  mpfr_t t;
  mpfr_init2(t, P.precision_bits());
  for (long i = 0; i < P.rows(); ++i)
    for (long j = 0; j < P.cols(); ++j) {
      mpfr_mul(t, P.at(i, j).raw(), Q.at(j, i).raw(), MPFR_RNDN);
      mpfr_add(acc.raw(), acc.raw(), t, MPFR_RNDN);
    }
  mpfr_clear(t);
  return acc;
}

BigReal lu_det_shifted(const RMatrix& A, const BigReal& c) {
  long n = A.rows();
  if (n != A.cols()) throw DomainError("lu_det_shifted needs a square matrix");
  mpfr_prec_t bits = A.precision_bits();
  RMatrix B(n, n, bits);
  BigReal one = make_with_bits(bits);
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      B.at(i, j) = c * A.at(i, j);
      if (i == j) B.at(i, j) += one;
    }
  int sign = 1;
  for (long col = 0; col < n; ++col) {
    long piv = col;
    BigReal best = abs(B.at(col, col));
    for (long r = col + 1; r < n; ++r) {
      BigReal m = abs(B.at(r, col));
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best.is_zero()) return make_with_bits(bits);  // singular
    if (piv != col) {
      sign = -sign;
      for (long j = 0; j < n; ++j) std::swap(B.at(col, j), B.at(piv, j));
    }
    const BigReal& d = B.at(col, col);
    parallel_for(col + 1, n, [&](long r) {
      BigReal f = B.at(r, col) / d;
      mpfr_t t;
      mpfr_init2(t, bits);
      mpfr_srcptr fr = f.raw();
      for (long j = col + 1; j < n; ++j) {
        mpfr_mul(t, fr, B.at(col, j).raw(), MPFR_RNDN);
        mpfr_sub(B.at(r, j).raw(), B.at(r, j).raw(), t, MPFR_RNDN);
      }
      mpfr_clear(t);
      B.at(r, col) = f;
    });
  }
  BigReal det = make_with_bits(bits);
  mpfr_set_si(det.raw(), sign, MPFR_RNDN);
  for (long i = 0; i < n; ++i) det *= B.at(i, i);
  return det;
}

BigComplex trace(const CMatrix& A) {
  BigComplex acc(BigReal(0));
  for (long i = 0; i < A.rows(); ++i) acc += A.at(i, i);
  return acc;
}

BigComplex trace_product(const CMatrix& P, const CMatrix& Q) {
  if (P.cols() != Q.rows() || P.rows() != Q.cols())
    throw DomainError("trace_product dimension mismatch");
  BigComplex acc(BigReal(0));
  for (long i = 0; i < P.rows(); ++i)
    for (long j = 0; j < P.cols(); ++j) acc += P.at(i, j) * Q.at(j, i);
  return acc;
}

namespace {

// In-place LU with partial pivoting; returns det. Zero pivot -> det 0.
BigComplex lu_det_inplace(CMatrix& A) {
  long n = A.rows();
  if (n != A.cols()) throw DomainError("lu_det needs a square matrix");
  mpfr_prec_t bits = A.precision_bits();
  if (n == 0) {
    BigReal one = make_with_bits(bits);
    mpfr_set_si(one.raw(), 1, MPFR_RNDN);
    return BigComplex(one);  // empty determinant convention
  }
  int sign = 1;
  for (long c = 0; c < n; ++c) {
    long piv = c;
    BigReal best = A.at(c, c).abs2();
    for (long r = c + 1; r < n; ++r) {
      BigReal m = A.at(r, c).abs2();
      if (m > best) {
        best = m;
        piv = r;
      }
    }
    if (best.is_zero()) {
      BigReal zero = make_with_bits(bits);
      return BigComplex(zero);
    }
    if (piv != c) {
      sign = -sign;
      for (long j = 0; j < n; ++j) std::swap(A.at(c, j), A.at(piv, j));
    }
    const BigComplex& d = A.at(c, c);
    parallel_for(c + 1, n, [&](long r) {
      BigComplex f = A.at(r, c) / d;
      mpfr_t t;
      mpfr_init2(t, bits);
      mpfr_srcptr fr = f.re().raw(), fi = f.im().raw();
      for (long j = c + 1; j < n; ++j) {
        mpfr_srcptr br = A.at(c, j).re().raw();
        mpfr_srcptr bi = A.at(c, j).im().raw();
        mpfr_ptr cr = A.at(r, j).re().raw();
        mpfr_ptr ci = A.at(r, j).im().raw();
        mpfr_mul(t, fr, br, MPFR_RNDN);
        mpfr_sub(cr, cr, t, MPFR_RNDN);
        mpfr_mul(t, fi, bi, MPFR_RNDN);
        mpfr_add(cr, cr, t, MPFR_RNDN);
        mpfr_mul(t, fr, bi, MPFR_RNDN);
        mpfr_sub(ci, ci, t, MPFR_RNDN);
        mpfr_mul(t, fi, br, MPFR_RNDN);
        mpfr_sub(ci, ci, t, MPFR_RNDN);
      }
      mpfr_clear(t);
      A.at(r, c) = f;
    });
  }
  BigReal one = make_with_bits(bits);
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  BigComplex det(one);
  if (sign < 0) det = -det;
  for (long i = 0; i < n; ++i) det *= A.at(i, i);
  return det;
}

}  // namespace

BigComplex lu_det(CMatrix A) { return lu_det_inplace(A); }

std::vector<BigReal> solve_dense(std::vector<std::vector<BigReal>> A,
                                 std::vector<BigReal> b) {
  long n = static_cast<long>(b.size());
  for (long c = 0; c < n; ++c) {
    long piv = c;
    for (long r = c + 1; r < n; ++r)
      if (abs(A[r][c]) > abs(A[piv][c])) piv = r;
    if (A[piv][c].is_zero()) throw PrecisionExhausted("solve_dense: singular system");
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (long r = c + 1; r < n; ++r) {
      BigReal f = A[r][c] / A[c][c];
      for (long j = c; j < n; ++j) A[r][j] -= f * A[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<BigReal> x(n, BigReal(0));
  for (long r = n - 1; r >= 0; --r) {
    BigReal s = b[r];
    for (long j = r + 1; j < n; ++j) s -= A[r][j] * x[j];
    x[r] = s / A[r][r];
  }
  return x;
}

std::vector<BigReal> least_squares(const std::vector<std::vector<BigReal>>& columns,
                                   const std::vector<BigReal>& y) {
  long nc = static_cast<long>(columns.size());
  long nr = static_cast<long>(y.size());
  std::vector<std::vector<BigReal>> G(nc, std::vector<BigReal>(nc, BigReal(0)));
  std::vector<BigReal> rhs(nc, BigReal(0));
  for (long a = 0; a < nc; ++a) {
    for (long b = a; b < nc; ++b) {
      BigReal s(0);
      for (long i = 0; i < nr; ++i) s += columns[a][i] * columns[b][i];
      G[a][b] = s;
      G[b][a] = s;
    }
    BigReal s(0);
    for (long i = 0; i < nr; ++i) s += columns[a][i] * y[i];
    rhs[a] = s;
  }
  return solve_dense(std::move(G), std::move(rhs));
}

BigComplex lu_det_shifted(const CMatrix& A, const BigComplex& c) {
  CMatrix B(A.rows(), A.cols(), A.precision_bits());
  BigReal one = make_with_bits(A.precision_bits());
  mpfr_set_si(one.raw(), 1, MPFR_RNDN);
  for (long i = 0; i < A.rows(); ++i)
    for (long j = 0; j < A.cols(); ++j) {
      B.at(i, j) = c * A.at(i, j);
      if (i == j) B.at(i, j) += BigComplex(one);
    }
  return lu_det_inplace(B);
}

}  // namespace icorr
