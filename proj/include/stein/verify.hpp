#pragma once

#include <string>
#include <vector>

#include "stein/stein_operator.hpp"

namespace stein {

// Self-check suites for the characterizing operator, its solution operator,
// and the derivative-seminorm contractions. The CLI and the acceptance gate
// both run these; defaults are the pinned acceptance settings.
struct VerifySpec {
  std::uint64_t null_samples = 200000;
  std::uint64_t seed = 12345;
  double null_z = 3.0;           // pass when |mean| <= null_z * SE
  double resid_tol_smooth = 1e-3;
  double resid_tol_exact = 1e-5;
  double contraction_slack = 0.05;
  double zero_floor = 1e-4;      // absolute floor when the target value is 0
  QuadSpec quad{};               // solver quadrature for residual checks
  QuadSpec quad_fast{.s_nodes = 32, .gh_nodes = 16};  // for seminorm sampling
  SamplerSpec sampler{.points = 24, .directions = 12};
};

struct SuiteResult {
  std::string name;
  bool pass = false;
  double value = 0;   // measured quantity
  double limit = 0;   // what it was compared against
  std::string detail;
};

// The fixed covariance trio used across the operator-level checks:
// identity, unequal diagonal, and a correlated matrix.
std::vector<Matrix> verification_covariances();

// E[A f(Z)] = 0 within null_z standard errors for every panel function and
// covariance.
std::vector<SuiteResult> verify_characterizing_null(const VerifySpec& spec = {});

// The solved equation holds pointwise on a fixed grid: finite-difference
// residual below resid_tol_smooth for all panel functions, and value
// agreement below resid_tol_exact where the solution has a closed form.
std::vector<SuiteResult> verify_solver_residual(const VerifySpec& spec = {});

// Seminorm contractions of the solution operator, driven by whichever
// seminorms each panel function declares finite.
std::vector<SuiteResult> verify_contractions(const VerifySpec& spec = {});

inline bool all_pass(const std::vector<SuiteResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace stein
