#pragma once

#include <cstdint>

#include "maid/budget.hpp"
#include "maid/problem.hpp"

namespace maid {

enum class SolveStatus {
  converged,         ///< the requested tolerance was certified
  budget_exhausted,  ///< stopped because the global budget ran out
  max_iter,          ///< stopped at the per-call iteration cap
};

const char* to_string(SolveStatus status);

/// Approximate lower-level minimizer together with its certificate.
struct LowerState {
  StateVector x_tilde;
  /// ε actually certified: ‖∇ₓh(x̃, θ)‖ ≤ eps_certified·μ(θ). Equals the requested
  /// ε on convergence, grad_norm/μ otherwise.
  double eps_certified = 0.0;
  double grad_norm = 0.0;
  /// Gradient evaluations performed; also the units charged to the budget.
  std::int64_t iterations_used = 0;
  SolveStatus status = SolveStatus::converged;

  bool ok() const { return status == SolveStatus::converged; }
};

struct FistaOptions {
  int max_iter = 50000;
};

/// Strongly convex FISTA with constant momentum (1 − √q)/(1 + √q), q = μ/L,
/// and step 1/L. The gradient at each extrapolated point doubles as the
/// stopping test ‖∇ₓh‖ ≤ ε·μ, so every iteration costs exactly one unit.
LowerState fista_solve(const BilevelProblem& problem, const ParamVector& theta,
                       const StateVector& warm_start, double eps, Budget& budget,
                       const FistaOptions& options = {});

}  // namespace maid
