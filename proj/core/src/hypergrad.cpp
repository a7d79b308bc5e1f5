#include "maid/hypergrad.hpp"

#include <algorithm>
#include <cmath>

namespace maid {

void LipschitzEstimates::observe_Hinv(double value) {
  if (std::isfinite(value)) L_Hinv_max = std::max(L_Hinv_max, value);
}

void LipschitzEstimates::observe_J(double value) {
  if (std::isfinite(value)) L_J_max = std::max(L_J_max, value);
}

double error_bound(double eps, double delta, double mu, double upper_grad_norm, double j_norm,
                   const LipschitzEstimates& lips) {
  if (!(mu > 0.0)) throw ConfigError("error_bound: mu must be positive");
  const double L_g = lips.L_upper_grad;
  const double c = L_g * j_norm / mu + lips.L_Hinv_max * upper_grad_norm * j_norm +
                   lips.L_J_max * upper_grad_norm / mu;
  return c * eps + (j_norm / mu) * delta + (lips.L_J_max * L_g / mu) * eps * eps;
}

double error_bound(const BilevelProblem& problem, const ParamVector& theta, const StateVector& x,
                   double eps, double delta, double j_norm, const LipschitzEstimates& lips) {
  return error_bound(eps, delta, problem.mu(theta), problem.upper_grad(x).norm(), j_norm, lips);
}

double estimate_L_Hinv(const BilevelProblem& problem, const ParamVector& theta,
                       const StateVector& x, const StateVector& q, const StateVector& upper_grad,
                       double delta, std::uint64_t seed, Budget& budget) {
  Rng rng(seed);
  StateVector noise = standard_normal(upper_grad.size(), rng);
  if (noise.norm() == 0.0) noise = standard_normal(upper_grad.size(), rng);
  const double denom = noise.norm();
  if (denom == 0.0) throw NumericalError("estimate_L_Hinv: zero perturbation drawn twice");

  const StateVector u = upper_grad + noise;
  const CgResult solve = cg_solve(problem, theta, x, u, delta, q, budget);
  return (q - solve.q).norm() / denom;
}

double estimate_L_J(const BilevelProblem& problem, const ParamVector& theta,
                    const StateVector& x, const StateVector& q, const ParamVector& jt_q,
                    std::uint64_t seed, Budget& budget, double relative_step) {
  Rng rng(seed);
  const double sigma = relative_step * (1.0 + x.norm());
  const StateVector x2 = x + sigma * random_unit_vector(x.size(), rng);
  const ParamVector jt_q2 = problem.mixed_jvp_transpose(x2, theta, q);
  budget.charge();
  require_finite(jt_q2, "estimate_L_J");
  return (jt_q - jt_q2).norm() / ((x - x2).norm() * std::max(q.norm(), 1.0));
}

const char* to_string(HypergradStatus status) {
  switch (status) {
    case HypergradStatus::accepted: return "accepted";
    case HypergradStatus::stationary_floor: return "stationary_floor";
    case HypergradStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

bool HypergradResult::certified(double eta) const {
  const double z_norm = z.norm();
  return z_norm > 0.0 && omega <= (1.0 - eta) * z_norm;
}

HypergradResult inexact_gradient(const BilevelProblem& problem, const ParamVector& theta,
                                 double eps, double delta, const WarmStart& warm,
                                 const HypergradOptions& options, LipschitzEstimates& lips,
                                 Budget& budget, SeedStreams& seeds) {
  if (!(eps > 0.0) || !(delta > 0.0)) throw ConfigError("inexact_gradient: eps, delta must be positive");
  if (!(options.eta > 0.0 && options.eta < 1.0)) throw ConfigError("inexact_gradient: eta must lie in (0,1)");
  if (!(options.nu_down > 0.0 && options.nu_down < 1.0)) {
    throw ConfigError("inexact_gradient: nu_down must lie in (0,1)");
  }

  lips.L_upper_grad = problem.lip_upper_grad();
  const double mu = problem.mu(theta);

  HypergradResult result;
  result.lower_state.x_tilde = warm.x;
  result.q = warm.q.size() == warm.x.size() ? warm.q : StateVector::Zero(warm.x.size());
  bool estimated = false;

  while (true) {
    result.attempts.emplace_back(eps, delta);
    result.eps_used = eps;
    result.delta_used = delta;

    const std::int64_t before_ll = budget.spent();
    result.lower_state =
        fista_solve(problem, theta, result.lower_state.x_tilde, eps, budget, options.fista);
    result.ll_iters += budget.spent() - before_ll;
    if (result.lower_state.status == SolveStatus::budget_exhausted) {
      result.status = HypergradStatus::budget_exhausted;
      return result;
    }
    const StateVector& x = result.lower_state.x_tilde;

    const StateVector upper_grad = problem.upper_grad(x);
    result.upper_value = problem.upper_value(x);
    result.upper_grad_norm = upper_grad.norm();

    const std::int64_t before_cg = budget.spent();
    // Every product below is checked first, so the cap is overrun by at most
    // the one call that detects exhaustion.
    auto out_of_budget = [&] {
      if (!budget.exhausted()) return false;
      result.cg_iters += budget.spent() - before_cg;
      result.status = HypergradStatus::budget_exhausted;
      return true;
    };
    const CgResult cg = cg_solve(problem, theta, x, upper_grad, delta, result.q, budget, options.cg);
    result.q = cg.q;
    if (out_of_budget()) return result;

    const ParamVector jt_q = problem.mixed_jvp_transpose(x, theta, result.q);
    budget.charge();
    require_finite(jt_q, "inexact_gradient hypergradient");
    result.z = -jt_q;

    if (!estimated) {
      if (out_of_budget()) return result;
      const double l_hinv = estimate_L_Hinv(problem, theta, x, result.q, upper_grad, delta,
                                            seeds.next("L_Hinv"), budget);
      if (out_of_budget()) return result;
      lips.observe_Hinv(l_hinv);
      lips.observe_J(estimate_L_J(problem, theta, x, result.q, jt_q, seeds.next("L_J"), budget,
                                  options.lj_relative_step));
      estimated = true;
    }
    if (out_of_budget()) return result;
    result.j_norm = power_method_step(problem, theta, x, seeds.next("power"), budget);
    result.cg_iters += budget.spent() - before_cg;

    // A solver that stopped at its iteration cap certifies less than requested;
    // the bound then uses what was actually achieved.
    const double eps_eff = std::max(eps, result.lower_state.eps_certified);
    const double delta_eff = std::max(delta, cg.residual_norm);
    result.omega = error_bound(eps_eff, delta_eff, mu, result.upper_grad_norm, result.j_norm, lips);

    if (!options.adapt || result.certified(options.eta)) {
      result.status = HypergradStatus::accepted;
      return result;
    }
    if (budget.exhausted()) {
      result.status = HypergradStatus::budget_exhausted;
      return result;
    }

    delta *= options.nu_down;
    eps *= options.nu_down;
    if (eps < options.eps_floor) {
      result.status = HypergradStatus::stationary_floor;
      return result;
    }
  }
}

}  // namespace maid
