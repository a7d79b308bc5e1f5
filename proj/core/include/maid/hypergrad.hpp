#pragma once

#include <cstdint>
#include <vector>

#include "maid/budget.hpp"
#include "maid/cg.hpp"
#include "maid/fista.hpp"
#include "maid/problem.hpp"
#include "maid/random.hpp"

namespace maid {

/// Running estimates of the constants entering the a posteriori hypergradient
/// error bound. The two maxima only ever grow during a run.
struct LipschitzEstimates {
  double L_Hinv_max = 0.0;
  double L_J_max = 0.0;
  double L_upper_grad = 0.0;

  void observe_Hinv(double value);
  void observe_J(double value);
};

/// ω = c·ε + (‖J‖/μ)·δ + (L_J·L_∇g/μ)·ε² with
/// c = L_∇g‖J‖/μ + L_H⁻¹‖∇g‖‖J‖ + L_J‖∇g‖/μ.
/// Throws ConfigError if μ ≤ 0.
double error_bound(double eps, double delta, double mu, double upper_grad_norm, double j_norm,
                   const LipschitzEstimates& lips);

/// Same bound with μ(θ) and ‖∇g(x̃)‖ taken from the problem.
double error_bound(const BilevelProblem& problem, const ParamVector& theta, const StateVector& x,
                   double eps, double delta, double j_norm, const LipschitzEstimates& lips);

/// Difference quotient ‖H⁻¹∇g − H⁻¹u‖/‖∇g − u‖ with u = ∇g + ζ, ζ standard normal.
/// Runs one extra CG solve (tolerance δ, warm-started from `q`) charged to `budget`.
double estimate_L_Hinv(const BilevelProblem& problem, const ParamVector& theta,
                       const StateVector& x, const StateVector& q, const StateVector& upper_grad,
                       double delta, std::uint64_t seed, Budget& budget);

/// ‖Jᵀ(x̃)q − Jᵀ(x₂)q‖ / (‖x̃ − x₂‖·max(‖q‖, 1)) with x₂ = x̃ + σ·ζ/‖ζ‖,
/// σ = relative_step·(1 + ‖x̃‖). `jt_q` is the already computed Jᵀ(x̃)q.
/// Charges 1 unit.
double estimate_L_J(const BilevelProblem& problem, const ParamVector& theta,
                    const StateVector& x, const StateVector& q, const ParamVector& jt_q,
                    std::uint64_t seed, Budget& budget, double relative_step = 0.01);

enum class HypergradStatus {
  accepted,          ///< ω ≤ (1 − η)‖z‖, or the single attempt of a fixed-accuracy call
  stationary_floor,  ///< ε fell below the floor without certifying descent
  budget_exhausted,
};

const char* to_string(HypergradStatus status);

struct HypergradResult {
  ParamVector z;
  double eps_used = 0.0;
  double delta_used = 0.0;
  double omega = 0.0;
  double j_norm = 0.0;
  LowerState lower_state;
  StateVector q;
  double upper_value = 0.0;       ///< g(x̃)
  double upper_grad_norm = 0.0;   ///< ‖∇g(x̃)‖
  HypergradStatus status = HypergradStatus::accepted;
  /// Every (ε, δ) pair tried, in order; the last one produced z.
  std::vector<std::pair<double, double>> attempts;
  std::int64_t ll_iters = 0;  ///< lower-level gradient evaluations
  std::int64_t cg_iters = 0;  ///< Hessian, Jacobian and estimator products

  bool certified(double eta) const;
};

struct HypergradOptions {
  double eta = 0.5;
  double nu_down = 0.5;
  double eps_floor = 1e-12;
  /// When false the first (ε, δ) is used as is: no certification loop.
  bool adapt = true;
  FistaOptions fista;
  CgOptions cg;
  double lj_relative_step = 0.01;
};

/// Warm-start payload carried between calls.
struct WarmStart {
  StateVector x;
  StateVector q;
};

/// Inexact hypergradient with certified descent: solve the lower level to ε,
/// the adjoint system to δ, form z = −Jᵀq and shrink (ε, δ) by ν̲ until the
/// a posteriori bound ω satisfies ω ≤ (1 − η)‖z‖ with ‖z‖ > 0.
///
/// The L_H⁻¹ and L_J estimators run once per call, on its first attempt;
/// the power-method estimate of ‖J‖ is refreshed on every attempt.
HypergradResult inexact_gradient(const BilevelProblem& problem, const ParamVector& theta,
                                 double eps, double delta, const WarmStart& warm,
                                 const HypergradOptions& options, LipschitzEstimates& lips,
                                 Budget& budget, SeedStreams& seeds);

}  // namespace maid
