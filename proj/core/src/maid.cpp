#include "maid/maid.hpp"

#include <cmath>
#include <string>

namespace maid {

void MaidConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid MAID config: " + what); };
  if (!(rho_down > 0.0 && rho_down < 1.0)) fail("rho_down must lie in (0,1)");
  if (!(rho_up > 1.0)) fail("rho_up must exceed 1");
  if (!(nu_down > 0.0 && nu_down < 1.0)) fail("nu_down must lie in (0,1)");
  if (!(nu_up > 1.0)) fail("nu_up must exceed 1");
  if (!(lambda > 0.0 && lambda < eta && eta < 1.0)) fail("need 0 < lambda < eta < 1");
  if (!(eps0 > 0.0) || !(delta0 > 0.0) || !(alpha0 > 0.0)) fail("eps0, delta0, alpha0 must be positive");
  if (max_bt < 1) fail("max_bt must be positive");
  if (budget_cap && *budget_cap < 0) fail("budget_cap must be non-negative");
  if (max_outer < 1) fail("max_outer must be positive");
  if (!(grad_tol >= 0.0)) fail("grad_tol must be non-negative");
  if (!(eps_floor > 0.0)) fail("eps_floor must be positive");
  if (max_inner_attempts < 1) fail("max_inner_attempts must be positive");
  if (fista.max_iter < 1) fail("fista max_iter must be positive");
}

double upper_bound_U(double g, double grad_norm, double lip_upper_grad, double eps) {
  return g + grad_norm * eps + 0.5 * lip_upper_grad * eps * eps;
}

double lower_bound_U(double g, double grad_norm, double lip_upper_grad, double eps, bool convex) {
  const double value = g - grad_norm * eps;
  return convex ? value : value - 0.5 * lip_upper_grad * eps * eps;
}

double upper_bound_U(const BilevelProblem& problem, const StateVector& x, double eps) {
  return upper_bound_U(problem.upper_value(x), problem.upper_grad(x).norm(),
                       problem.lip_upper_grad(), eps);
}

double lower_bound_U(const BilevelProblem& problem, const StateVector& x, double eps) {
  return lower_bound_U(problem.upper_value(x), problem.upper_grad(x).norm(),
                       problem.lip_upper_grad(), eps, problem.upper_is_convex());
}

LineSearchResult line_search(const BilevelProblem& problem, const ParamVector& theta,
                             const ParamVector& z, double eps, const LowerState& current,
                             double alpha_start, const MaidConfig& config, Budget& budget,
                             int j_max) {
  if (!(alpha_start > 0.0)) throw ConfigError("line_search: alpha_start must be positive");

  LineSearchResult result;
  result.lower_current = lower_bound_U(problem, current.x_tilde, std::max(eps, current.eps_certified));
  const double z_norm = z.norm();
  double alpha = alpha_start;

  for (int i = 0; i < j_max; ++i) {
    if (budget.exhausted()) {
      result.budget_exhausted = true;
      result.alpha = alpha;
      return result;
    }
    const ParamVector theta_trial = theta - alpha * z;
    LowerState trial = fista_solve(problem, theta_trial, current.x_tilde, eps, budget, config.fista);
    result.ll_iters += trial.iterations_used;
    if (trial.status == SolveStatus::budget_exhausted) {
      result.budget_exhausted = true;
      result.alpha = alpha;
      return result;
    }
    ++result.attempts;
    result.upper_trial = upper_bound_U(problem, trial.x_tilde, std::max(eps, trial.eps_certified));
    result.psi = psi_value(result.upper_trial, result.lower_current, config.lambda, alpha, z_norm);
    if (result.psi <= 0.0) {
      result.accepted = true;
      result.alpha = alpha;
      result.trial = std::move(trial);
      return result;
    }
    alpha *= config.rho_down;
  }
  result.alpha = alpha;
  return result;
}

const char* to_string(IterationOutcome outcome) {
  switch (outcome) {
    case IterationOutcome::accepted: return "accepted";
    case IterationOutcome::bt_failed_accuracy_shrunk: return "bt_failed_accuracy_shrunk";
    case IterationOutcome::stationary_floor: return "stationary_floor";
    case IterationOutcome::budget_exhausted: return "budget_exhausted";
    case IterationOutcome::grad_tol: return "grad_tol";
    case IterationOutcome::inner_limit: return "inner_limit";
  }
  return "unknown";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::max_outer: return "max_outer";
    case StopReason::grad_tol: return "grad_tol";
    case StopReason::stationary_floor: return "stationary_floor";
    case StopReason::inner_limit: return "inner_limit";
  }
  return "unknown";
}

MaidResult maid_run(const BilevelProblem& problem, const ParamVector& theta0,
                    const MaidConfig& config) {
  config.validate();
  require_finite(theta0, "maid_run initial parameters");
  if (theta0.size() != problem.dims().d) throw ConfigError("maid_run: theta0 has wrong length");

  Budget budget(config.budget_cap);
  SeedStreams seeds(derive_seed(config.seed, "maid_run"));

  HypergradOptions hg_options;
  hg_options.eta = config.eta;
  hg_options.nu_down = config.nu_down;
  hg_options.eps_floor = config.eps_floor;
  hg_options.adapt = !config.fixed_accuracy;
  hg_options.fista = config.fista;
  hg_options.cg = config.cg;

  MaidResult out;
  out.theta = theta0;
  WarmStart warm{problem.initial_state(theta0), StateVector::Zero(problem.dims().n)};

  double eps = config.eps0;
  double delta = config.delta0;
  double alpha = config.alpha0;
  bool alpha_pending = config.step_init == StepInit::sqrt_d_over_z0;
  const bool convex = problem.upper_is_convex();
  const double lip_g = problem.lip_upper_grad();

  auto finish = [&](IterationRecord& rec, IterationOutcome outcome, StopReason reason) {
    rec.outcome = outcome;
    rec.cumulative_cost = budget.spent();
    out.records.push_back(std::move(rec));
    out.stop_reason = reason;
    out.total_cost = budget.spent();
    return out;
  };

  for (std::int64_t k = 0; k < config.max_outer; ++k) {
    IterationRecord rec;
    rec.k = k;
    rec.theta = out.theta;
    rec.eps_start = eps;
    rec.alpha_start = alpha;

    int failed_rounds = 0;
    std::int64_t trials = 0;
    LineSearchResult accepted;
    ParamVector z;

    for (int j = config.max_bt;; ++j) {
      const HypergradResult hg =
          inexact_gradient(problem, out.theta, eps, delta, warm, hg_options, out.lips, budget, seeds);
      rec.ll_iters += hg.ll_iters;
      rec.cg_iters += hg.cg_iters;
      warm.x = hg.lower_state.x_tilde;
      warm.q = hg.q;
      eps = hg.eps_used;
      delta = hg.delta_used;

      const double eps_cert = std::max(eps, hg.lower_state.eps_certified);
      rec.g_inexact = hg.upper_value;
      rec.f_upper_bound = upper_bound_U(hg.upper_value, hg.upper_grad_norm, lip_g, eps_cert);
      rec.f_lower_bound = lower_bound_U(hg.upper_value, hg.upper_grad_norm, lip_g, eps_cert, convex);
      rec.eps = eps;
      rec.delta = delta;
      rec.omega = hg.omega;
      rec.z_norm = hg.z.size() > 0 ? hg.z.norm() : 0.0;

      if (hg.status == HypergradStatus::budget_exhausted) {
        return finish(rec, IterationOutcome::budget_exhausted, StopReason::budget_exhausted);
      }
      if (hg.status == HypergradStatus::stationary_floor) {
        return finish(rec, IterationOutcome::stationary_floor, StopReason::stationary_floor);
      }
      if (alpha_pending && rec.z_norm > 0.0) {
        alpha = std::sqrt(static_cast<double>(problem.dims().d)) / rec.z_norm;
        rec.alpha_start = alpha;
        alpha_pending = false;
      }
      if (config.grad_tol > 0.0 && rec.z_norm <= config.grad_tol && hg.certified(config.eta)) {
        return finish(rec, IterationOutcome::grad_tol, StopReason::grad_tol);
      }

      LineSearchResult ls =
          line_search(problem, out.theta, hg.z, eps, hg.lower_state, alpha, config, budget, j);
      rec.ll_iters += ls.ll_iters;
      rec.bt_attempts += ls.attempts;
      rec.psi = ls.psi;
      rec.upper_trial = ls.upper_trial;
      trials += ls.attempts;

      if (ls.accepted) {
        accepted = std::move(ls);
        z = hg.z;
        break;
      }
      if (ls.budget_exhausted) {
        return finish(rec, IterationOutcome::budget_exhausted, StopReason::budget_exhausted);
      }
      // Each retry restarts from β_k with a longer allowance; shrinking α in
      // place across rounds underflows it after a handful of failures.
      alpha = rec.alpha_start;
      ++failed_rounds;
      if (!config.fixed_accuracy) {
        eps *= config.nu_down;
        delta *= config.nu_down;
        if (eps < config.eps_floor) {
          return finish(rec, IterationOutcome::stationary_floor, StopReason::stationary_floor);
        }
      }
      if (trials >= config.max_inner_attempts) {
        return finish(rec, IterationOutcome::inner_limit, StopReason::inner_limit);
      }
    }

    rec.alpha = accepted.alpha;
    rec.outcome = failed_rounds > 0 ? IterationOutcome::bt_failed_accuracy_shrunk
                                    : IterationOutcome::accepted;
    rec.cumulative_cost = budget.spent();
    out.records.push_back(std::move(rec));

    out.theta -= accepted.alpha * z;
    warm.x = accepted.trial.x_tilde;
    if (!config.fixed_accuracy) {
      eps *= config.nu_up;
      delta *= config.nu_up;
    }
    alpha = config.rho_up * accepted.alpha;
  }

  out.stop_reason = StopReason::max_outer;
  out.total_cost = budget.spent();
  return out;
}

}  // namespace maid
