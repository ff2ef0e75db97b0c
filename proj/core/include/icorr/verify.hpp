#pragma once

#include <string>
#include <vector>

#include "icorr/connection.hpp"
#include "icorr/painleve.hpp"

namespace icorr::verify {

struct Case {
  std::string inputs;
  std::string expected;
  std::string got;
  std::string tolerance;
  bool pass = false;
};

struct Report {
  std::string suite;
  std::vector<Case> cases;
  double seconds = 0;
  long n_pass() const;
  long n_fail() const;
  bool ok() const { return n_fail() == 0; }
};

/// Suites: toda, recurrence, identities, crossmethod, smallt, limits.
std::vector<std::string> suite_names();
Report run_suite(const std::string& name);

/// Fredholm settings tuned per t for the 1e-10 cross-method grids: contour at
/// k^{1/3} (balances the k and rho^2 error terms) and reduced compute
/// precision on the heavy near-critical points.
corr::FredholmConfig tuned_fredholm(const BigReal& t);

/// Integrate + fit one connection case and compare with the closed forms.
struct PipelineResult {
  pvi::ConnectionFit fit;
  conn::ConnectionConstants closed;
  BigReal sigma_err;      // |sigma_fit - sigma|
  BigReal shat_rel_err;   // |shat_fit/shat - 1|
  BigReal K_rel_err;      // |K_fit/K - 1|
  long steps_accepted = 0;
  long steps_rejected = 0;
  BigReal max_residual;
};
PipelineResult run_connection_pipeline(long N, const BigReal& lambda,
                                       const BigReal& t0, const BigReal& t1,
                                       const BigReal& tol);

// case helpers shared with the acceptance binary
void check_abs(Report& r, const std::string& inputs, const BigReal& expected,
               const BigReal& got, const BigReal& tol);
void check_le(Report& r, const std::string& inputs, const BigReal& got,
              const BigReal& bound);

}  // namespace icorr::verify
