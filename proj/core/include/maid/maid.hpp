#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maid/budget.hpp"
#include "maid/hypergrad.hpp"
#include "maid/problem.hpp"

namespace maid {

/// Initial step-size policy.
enum class StepInit {
  fixed,            ///< α₀ from the config
  sqrt_d_over_z0,   ///< α₀ = √d / ‖z₀‖ from the first hypergradient
};

struct MaidConfig {
  double rho_down = 0.5;        ///< ρ̲, step shrink
  double rho_up = 10.0 / 9.0;   ///< ρ̄, step growth
  double nu_down = 0.5;         ///< ν̲, accuracy shrink
  double nu_up = 1.25;          ///< ν̄, accuracy growth
  double eta = 0.5;
  double lambda = 0.25;
  double eps0 = 1e-1;
  double delta0 = 1e-1;
  double alpha0 = 1e-1;
  StepInit step_init = StepInit::fixed;
  int max_bt = 30;
  std::optional<std::int64_t> budget_cap;
  std::int64_t max_outer = 1'000'000;
  /// Baseline mode: ε and δ stay at eps0/delta0 for the whole run.
  bool fixed_accuracy = false;
  double grad_tol = 0.0;
  double eps_floor = 1e-12;
  /// Line-search trials allowed per outer iteration across all rounds.
  std::int64_t max_inner_attempts = 10000;
  std::uint64_t seed = 0;
  FistaOptions fista;
  CgOptions cg;

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

/// Ū(x, ε) = g(x) + ‖∇g(x)‖ε + (L_∇g/2)ε²
double upper_bound_U(const BilevelProblem& problem, const StateVector& x, double eps);
/// U̲(x, ε) = g(x) − ‖∇g(x)‖ε, minus (L_∇g/2)ε² unless the upper loss is convex.
double lower_bound_U(const BilevelProblem& problem, const StateVector& x, double eps);

/// Pure forms of the envelopes from precomputed g(x) and ‖∇g(x)‖.
double upper_bound_U(double g, double grad_norm, double lip_upper_grad, double eps);
double lower_bound_U(double g, double grad_norm, double lip_upper_grad, double eps, bool convex);

/// Inexact sufficient-decrease function ψ(α) = Ū_trial − U̲_current + λα‖z‖².
/// Passing the convex envelope as `lower_current` yields the convex variant.
inline double psi_value(double upper_trial, double lower_current, double lambda, double alpha,
                        double z_norm) {
  return upper_trial - lower_current + lambda * alpha * z_norm * z_norm;
}

struct LineSearchResult {
  bool accepted = false;
  bool budget_exhausted = false;
  double alpha = 0.0;          ///< accepted step, or the next start after a failure
  LowerState trial;            ///< lower state at θ − αz (meaningful when accepted)
  double upper_trial = 0.0;    ///< Ū(x̃_trial, ε)
  double lower_current = 0.0;  ///< U̲(x̃_k, ε)
  double psi = 0.0;            ///< ψ at the last evaluated trial
  int attempts = 0;
  std::int64_t ll_iters = 0;
};

/// Backtracking over α = α_start·ρ̲ⁱ, i < j_max, accepting the first α with
/// ψ(α) ≤ 0. Each trial solves the lower level at θ − αz to the current ε,
/// warm-started from x̃(θ). After a failed search `alpha` is α_start·ρ̲^j_max.
LineSearchResult line_search(const BilevelProblem& problem, const ParamVector& theta,
                             const ParamVector& z, double eps, const LowerState& current,
                             double alpha_start, const MaidConfig& config, Budget& budget,
                             int j_max);

enum class IterationOutcome {
  accepted,                   ///< step taken on the first backtracking round
  bt_failed_accuracy_shrunk,  ///< step taken after ≥ 1 failed round and accuracy shrink
  stationary_floor,           ///< no certified descent above the ε floor; run stops
  budget_exhausted,           ///< budget ran out before a step; run stops
  grad_tol,                   ///< certified ‖z‖ ≤ grad_tol; run stops
  inner_limit,                ///< max_inner_attempts line-search trials without a step
};

const char* to_string(IterationOutcome outcome);

enum class StopReason { budget_exhausted, max_outer, grad_tol, stationary_floor, inner_limit };

const char* to_string(StopReason reason);

struct IterationRecord {
  std::int64_t k = 0;
  ParamVector theta;          ///< θ_k
  double g_inexact = 0.0;     ///< g(x̃(θ_k))
  double f_upper_bound = 0.0; ///< Ū(x̃_k, ε_k)
  double f_lower_bound = 0.0; ///< U̲(x̃_k, ε_k)
  double eps = 0.0;           ///< ε_k that produced z_k
  double delta = 0.0;
  double eps_start = 0.0;     ///< ε on entry to the iteration
  double alpha = 0.0;         ///< accepted α_k (0 if no step)
  double alpha_start = 0.0;   ///< β_k, the first trial of the iteration
  double z_norm = 0.0;
  double omega = 0.0;
  double psi = 0.0;           ///< ψ at the accepted α (last trial otherwise)
  double upper_trial = 0.0;   ///< Ū(x̃_{k+1}, ε_k) at the accepted trial
  std::int64_t ll_iters = 0;
  std::int64_t cg_iters = 0;
  std::int64_t cumulative_cost = 0;
  int bt_attempts = 0;
  IterationOutcome outcome = IterationOutcome::accepted;
};

struct MaidResult {
  ParamVector theta;
  std::vector<IterationRecord> records;
  StopReason stop_reason = StopReason::max_outer;
  LipschitzEstimates lips;
  std::int64_t total_cost = 0;
};

/// Method of adaptive inexact descent. Every outer iteration appends exactly one
/// record; all stop reasons are ordinary returns.
MaidResult maid_run(const BilevelProblem& problem, const ParamVector& theta0,
                    const MaidConfig& config);

}  // namespace maid
