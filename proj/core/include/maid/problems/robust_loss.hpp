#pragma once

#include "maid/problem.hpp"

namespace maid {

/// Replaces the upper loss of `inner` with the bounded non-convex loss
///
///   g(x) = (1/m) Σₜ sₜ/(1 + sₜ),   sₜ = ‖xₜ − x*ₜ‖²,
///
/// where the state is split into m equal blocks. L_∇g = 2/m and the loss is
/// flagged non-convex. The lower level is forwarded unchanged.
class RobustLossWrapper final : public BilevelProblem {
 public:
  RobustLossWrapper(ProblemPtr inner, StateVector target, int blocks = 1);

  Dims dims() const override { return inner_->dims(); }

  double lower_value(const StateVector& x, const ParamVector& theta) const override {
    return inner_->lower_value(x, theta);
  }
  StateVector lower_grad(const StateVector& x, const ParamVector& theta) const override {
    return inner_->lower_grad(x, theta);
  }
  StateVector lower_hvp(const StateVector& x, const ParamVector& theta,
                        const StateVector& v) const override {
    return inner_->lower_hvp(x, theta, v);
  }
  StateVector mixed_jvp(const StateVector& x, const ParamVector& theta,
                        const ParamVector& w) const override {
    return inner_->mixed_jvp(x, theta, w);
  }
  ParamVector mixed_jvp_transpose(const StateVector& x, const ParamVector& theta,
                                  const StateVector& v) const override {
    return inner_->mixed_jvp_transpose(x, theta, v);
  }

  double upper_value(const StateVector& x) const override;
  StateVector upper_grad(const StateVector& x) const override;

  double mu(const ParamVector& theta) const override { return inner_->mu(theta); }
  double lip_lower(const ParamVector& theta) const override { return inner_->lip_lower(theta); }
  double lip_upper_grad() const override { return 2.0 / static_cast<double>(blocks_); }
  bool upper_is_convex() const override { return false; }

  StateVector initial_state(const ParamVector& theta) const override {
    return inner_->initial_state(theta);
  }

 private:
  ProblemPtr inner_;
  StateVector target_;
  int blocks_;
  Eigen::Index block_size_;
};

}  // namespace maid
