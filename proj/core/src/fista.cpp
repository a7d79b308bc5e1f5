#include "maid/fista.hpp"

#include <cmath>
#include <limits>

namespace maid {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::budget_exhausted: return "budget_exhausted";
    case SolveStatus::max_iter: return "max_iter";
  }
  return "unknown";
}

LowerState fista_solve(const BilevelProblem& problem, const ParamVector& theta,
                       const StateVector& warm_start, double eps, Budget& budget,
                       const FistaOptions& options) {
  if (!(eps > 0.0)) throw ConfigError("fista_solve: eps must be positive");
  if (options.max_iter < 1) throw ConfigError("fista_solve: max_iter must be positive");
  require_finite(warm_start, "fista_solve warm start");

  const double mu = problem.mu(theta);
  const double lip = problem.lip_lower(theta);
  if (!(mu > 0.0) || !(lip >= mu)) throw ConfigError("fista_solve: need 0 < mu <= L");

  const double sqrt_q = std::sqrt(mu / lip);
  const double momentum = (1.0 - sqrt_q) / (1.0 + sqrt_q);
  const double step = 1.0 / lip;
  const double target = eps * mu;

  LowerState best;
  best.x_tilde = warm_start;
  best.grad_norm = std::numeric_limits<double>::infinity();

  StateVector x = warm_start;  // last proximal-gradient iterate
  StateVector y = warm_start;  // extrapolated point, where the gradient is taken
  std::int64_t evals = 0;

  auto finish = [&](SolveStatus status) {
    best.iterations_used = evals;
    best.status = status;
    best.eps_certified = status == SolveStatus::converged ? eps : best.grad_norm / mu;
    return best;
  };

  while (true) {
    if (evals >= options.max_iter) return finish(SolveStatus::max_iter);
    if (budget.exhausted()) return finish(SolveStatus::budget_exhausted);

    const StateVector grad = problem.lower_grad(y, theta);
    ++evals;
    budget.charge();
    require_finite(grad, "fista_solve gradient");

    const double grad_norm = grad.norm();
    if (grad_norm < best.grad_norm) {
      best.grad_norm = grad_norm;
      best.x_tilde = y;
    }
    if (grad_norm <= target) return finish(SolveStatus::converged);

    StateVector x_next = y - step * grad;
    require_finite(x_next, "fista_solve iterate");
    y = x_next + momentum * (x_next - x);
    x = std::move(x_next);
  }
}

}  // namespace maid
