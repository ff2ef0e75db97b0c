#pragma once

#include <stdexcept>
#include <string>

namespace icorr {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// A NaN/Inf was produced or an integrand blew up at a quadrature node.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what) : Error(what) {}
};

class NodeSingularity : public Error {
 public:
  explicit NodeSingularity(const std::string& what) : Error(what) {}
};

// Adaptive refinement hit its cap before reaching tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, const std::string& last,
                const std::string& prev)
      : Error(what + " [last=" + last + ", prev=" + prev + "]"),
        last_value(last),
        previous_value(prev) {}
  explicit NoConvergence(const std::string& what) : Error(what) {}
  std::string last_value;
  std::string previous_value;
};

// Contour radius places a node on (or across) a square-root branch cut.
class BranchCutError : public Error {
 public:
  explicit BranchCutError(const std::string& what) : Error(what) {}
};

// A quantity that must be real carried an imaginary residue above tolerance.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

// Finite differencing noise swamped the quantity being extracted.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

// Newton continuation converged to a different root than the tracked branch.
class BranchLost : public Error {
 public:
  explicit BranchLost(const std::string& what) : Error(what) {}
};

// The h'' radicand went negative beyond tolerance during integration.
class BranchError : public Error {
 public:
  explicit BranchError(const std::string& what) : Error(what) {}
};

class IntegrationFailed : public Error {
 public:
  explicit IntegrationFailed(const std::string& what) : Error(what) {}
};

class FitFailed : public Error {
 public:
  explicit FitFailed(const std::string& what) : Error(what) {}
};

// sigma in {0,1}: the x^{1±sigma} exponents degenerate.
class DegenerateExponent : public Error {
 public:
  explicit DegenerateExponent(const std::string& what) : Error(what) {}
};

}  // namespace icorr
