#include "icorr/quadrature.hpp"

namespace icorr {

CircleQuadrature CircleQuadrature::make(const BigReal& rho, long M) {
  if (rho <= 0 || rho >= 1) throw DomainError("circle radius must lie in (0,1)");
  if (M < 2 || M % 2 != 0) throw DomainError("circle quadrature needs even M >= 2");
  CircleQuadrature q;
  q.radius = rho;
  q.points = M;
  q.nodes.resize(M, BigComplex(BigReal(0)));
  q.weights.resize(M, BigComplex(BigReal(0)));
  BigReal two_pi = 2 * pi(rho.precision_digits());
  BigReal invM = BigReal(1) / BigReal(M);
  // nodes mirrored so that z_{M-m} = conj(z_m) holds bitwise
  for (long m = 0; m <= M / 2; ++m) {
    BigReal theta = two_pi * BigReal(m) * invM;
    BigReal c = cos(theta), s = sin(theta);
    BigComplex z(rho * c, rho * s);
    if (m == 0 || m == M / 2) z = BigComplex(rho * c, BigReal(0) * s);
    q.nodes[m] = z;
    if (m != 0 && m != M / 2) q.nodes[M - m] = z.conj();
  }
  for (long m = 0; m < M; ++m) {
    const BigComplex& z = q.nodes[m];
    q.weights[m] = BigComplex(-z.im() * invM, z.re() * invM);  // i z / M
  }
  return q;
}

BigComplex CircleQuadrature::residue_check() const {
  BigComplex acc(BigReal(0));
  for (long m = 0; m < points; ++m) acc += weights[m] / nodes[m];
  return acc;
}

BigComplex quad_circle(const CIntegrand& f, const CircleQuadrature& q) {
  BigComplex acc(BigReal(0));
  for (long m = 0; m < q.points; ++m) {
    BigComplex v = f(q.nodes[m]);
    if (!v.is_finite())
      throw NodeSingularity("integrand non-finite at node " + std::to_string(m) +
                            " of " + std::to_string(q.points));
    acc += q.weights[m] * v;
  }
  return acc;
}

std::pair<BigComplex, long> adaptive_circle(const CIntegrand& f, const BigReal& rho,
                                            const BigReal& tol, long m0, long cap) {
  if (tol.sign() <= 0) throw DomainError("adaptive_circle: tol must be positive");
  long M = m0;
  BigComplex prev = quad_circle(f, CircleQuadrature::make(rho, M));
  while (2 * M <= cap) {
    BigComplex cur = quad_circle(f, CircleQuadrature::make(rho, 2 * M));
    // converged: the coarser level was already adequate, report it
    if ((cur - prev).abs() < tol) return {cur, M};
    if (4 * M > cap)
      throw NoConvergence("adaptive_circle: cap " + std::to_string(cap) +
                              " reached before tolerance",
                          cur.str(20), prev.str(20));
    prev = cur;
    M *= 2;
  }
  throw NoConvergence("adaptive_circle: cap below starting M", prev.str(20),
                      prev.str(20));
}

}  // namespace icorr
