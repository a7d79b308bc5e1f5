#pragma once

#include <cstdint>
#include <string>

#include "maid/problem.hpp"

namespace maid {

/// Maximum discrepancies found by check_derivatives. Every entry is a relative
/// error |a − b| / max(|a|, |b|, 1) (vector norms for vector quantities).
struct DerivativeReport {
  double lower_grad = 0.0;       ///< ∇ₓh vs central differences of h
  double lower_hvp = 0.0;        ///< ∇²ₓh·v vs central differences of ∇ₓh
  double hvp_symmetry = 0.0;     ///< vᵀ(Hu) vs uᵀ(Hv)
  double mixed_jvp = 0.0;        ///< ∇²ₓθh·w vs central differences of ∇ₓh in θ
  double mixed_adjoint = 0.0;    ///< vᵀ(Jw) vs wᵀ(Jᵀv)
  double upper_grad = 0.0;       ///< ∇g vs central differences of g
  /// Rayleigh quotients of ∇²ₓh observed across the probes.
  double rayleigh_min = 0.0;
  double rayleigh_max = 0.0;
  double mu = 0.0;
  double lip = 0.0;

  /// Largest of the derivative discrepancies (excludes the Rayleigh bounds).
  double max_error() const;
  /// True when mu ≤ rayleigh_min and rayleigh_max ≤ lip, up to relative `slack`.
  bool constants_consistent(double slack = 1e-8) const;
  /// Name of the worst check, e.g. "lower_hvp"; empty when all errors are zero.
  std::string worst_check() const;
};

/// Central-difference step used throughout: 1e-6·(1 + ‖point‖∞).
double fd_step(const Eigen::Ref<const Eigen::VectorXd>& point);

/// Probes the hand-coded derivatives of `problem` at (x, θ) along `samples`
/// random directions drawn from `seed`. Throws NumericalError naming the
/// operation if any evaluation is non-finite.
DerivativeReport check_derivatives(const BilevelProblem& problem, const ParamVector& theta,
                                   const StateVector& x, int samples, std::uint64_t seed);

}  // namespace maid
