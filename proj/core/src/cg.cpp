#include "maid/cg.hpp"

#include <cmath>

#include "maid/random.hpp"

namespace maid {

CgResult cg_solve(const BilevelProblem& problem, const ParamVector& theta, const StateVector& x,
                  const StateVector& rhs, double delta, const StateVector& warm_start,
                  Budget& budget, const CgOptions& options) {
  if (!(delta > 0.0)) throw ConfigError("cg_solve: delta must be positive");
  const Eigen::Index n = rhs.size();
  const std::int64_t max_products = options.max_iter > 0 ? options.max_iter : 10 * n + 50;

  CgResult result;
  result.q = warm_start.size() == n ? warm_start : StateVector::Zero(n);
  require_finite(result.q, "cg_solve warm start");
  require_finite(rhs, "cg_solve right-hand side");

  auto hvp = [&](const StateVector& v) {
    StateVector out = problem.lower_hvp(x, theta, v);
    ++result.iterations_used;
    budget.charge();
    require_finite(out, "cg_solve Hessian-vector product");
    return out;
  };

  auto stop = [&](SolveStatus status) {
    result.status = status;
    return result;
  };

  // Outer loop: (re)start from the current iterate with an exact residual.
  while (true) {
    if (result.iterations_used >= max_products) return stop(SolveStatus::max_iter);
    if (budget.exhausted()) return stop(SolveStatus::budget_exhausted);

    StateVector r = rhs - hvp(result.q);
    result.residual_norm = r.norm();
    if (result.residual_norm <= delta) return stop(SolveStatus::converged);

    StateVector p = r;
    double rr = r.squaredNorm();
    while (true) {
      if (result.iterations_used >= max_products) return stop(SolveStatus::max_iter);
      if (budget.exhausted()) return stop(SolveStatus::budget_exhausted);

      const StateVector Hp = hvp(p);
      const double curvature = p.dot(Hp);
      if (!(curvature > 0.0)) throw NumericalError("cg_solve: Hessian is not positive definite");
      const double step = rr / curvature;
      result.q += step * p;
      r -= step * Hp;
      const double rr_next = r.squaredNorm();
      if (std::sqrt(rr_next) <= delta) break;  // verify with a true residual
      p = r + (rr_next / rr) * p;
      rr = rr_next;
    }
  }
}

double power_method_step(const BilevelProblem& problem, const ParamVector& theta,
                         const StateVector& x, std::uint64_t seed, Budget& budget) {
  Rng rng(seed);
  const ParamVector w0 = random_unit_vector(problem.dims().d, rng);
  const StateVector Jw = problem.mixed_jvp(x, theta, w0);
  const ParamVector w1 = problem.mixed_jvp_transpose(x, theta, Jw);
  budget.charge(2);
  require_finite(w1, "power_method_step");
  return std::sqrt(std::max(0.0, w0.dot(w1)));
}

}  // namespace maid
