#pragma once

#include <memory>

#include "maid/types.hpp"

namespace maid {

struct Dims {
  Eigen::Index n = 0;  ///< state dimension
  Eigen::Index d = 0;  ///< parameter dimension
};

/// Bilevel problem  min_θ g(x̂(θ))  s.t.  x̂(θ) = argmin_x h(x, θ).
///
/// h must be μ(θ)-strongly convex and L(θ)-smooth in x, g must have an
/// L_∇g-Lipschitz gradient. Implementations are immutable after construction,
/// so every method is safe to call concurrently.
class BilevelProblem {
 public:
  virtual ~BilevelProblem() = default;

  virtual Dims dims() const = 0;

  virtual double lower_value(const StateVector& x, const ParamVector& theta) const = 0;
  virtual StateVector lower_grad(const StateVector& x, const ParamVector& theta) const = 0;
  /// ∇²ₓh(x, θ)·v
  virtual StateVector lower_hvp(const StateVector& x, const ParamVector& theta,
                                const StateVector& v) const = 0;
  /// ∇²ₓθh(x, θ)·w, with w shaped like θ.
  virtual StateVector mixed_jvp(const StateVector& x, const ParamVector& theta,
                                const ParamVector& w) const = 0;
  /// ∇²ₓθh(x, θ)ᵀ·v
  virtual ParamVector mixed_jvp_transpose(const StateVector& x, const ParamVector& theta,
                                          const StateVector& v) const = 0;

  virtual double upper_value(const StateVector& x) const = 0;
  virtual StateVector upper_grad(const StateVector& x) const = 0;

  virtual double mu(const ParamVector& theta) const = 0;
  virtual double lip_lower(const ParamVector& theta) const = 0;
  virtual double lip_upper_grad() const = 0;
  virtual bool upper_is_convex() const = 0;

  /// Cold-start point for the very first lower-level solve.
  virtual StateVector initial_state(const ParamVector& /*theta*/) const {
    return StateVector::Zero(dims().n);
  }
};

/// Closed-form quantities, available only for problems that have them.
class ExactOracle {
 public:
  virtual ~ExactOracle() = default;
  virtual StateVector exact_lower_solution(const ParamVector& theta) const = 0;
  virtual double exact_upper_value(const ParamVector& theta) const = 0;
  virtual ParamVector exact_hypergradient(const ParamVector& theta) const = 0;
};

using ProblemPtr = std::shared_ptr<const BilevelProblem>;

}  // namespace maid
