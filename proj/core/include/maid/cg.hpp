#pragma once

#include <cstdint>

#include "maid/budget.hpp"
#include "maid/fista.hpp"
#include "maid/problem.hpp"

namespace maid {

struct CgResult {
  StateVector q;
  /// ‖∇²ₓh·q − rhs‖ from an explicitly recomputed residual.
  double residual_norm = 0.0;
  /// Hessian-vector products performed, including the initial residual and the
  /// final verification product. Equals the units charged to the budget.
  std::int64_t iterations_used = 0;
  SolveStatus status = SolveStatus::converged;

  bool ok() const { return status == SolveStatus::converged; }
};

struct CgOptions {
  /// Cap on Hessian-vector products; 0 selects 10·n + 50.
  std::int64_t max_iter = 0;
};

/// Conjugate gradients on ∇²ₓh(x̃, θ)·q = rhs until the true residual is ≤ δ.
///
/// The recursive residual drives the iteration; once it drops below δ the true
/// residual is recomputed and CG restarts from the current iterate if the two
/// have drifted apart.
CgResult cg_solve(const BilevelProblem& problem, const ParamVector& theta, const StateVector& x,
                  const StateVector& rhs, double delta, const StateVector& warm_start,
                  Budget& budget, const CgOptions& options = {});

/// One power iteration on JᵀJ, J = ∇²ₓθh(x̃, θ): returns √(w₀ᵀJᵀJw₀) = ‖Jw₀‖
/// for a seeded unit vector w₀. Charges 2 units (one product with J, one with Jᵀ).
double power_method_step(const BilevelProblem& problem, const ParamVector& theta,
                         const StateVector& x, std::uint64_t seed, Budget& budget);

}  // namespace maid
