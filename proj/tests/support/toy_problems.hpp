#pragma once

#include <memory>

#include "maid/problem.hpp"

namespace maid::testing {

/// h(x, θ) = (s/2)‖x − y‖² − xᵀCθ,  g(x) = ½‖x − x*‖².
/// Hessian sI, mixed derivative −C, x̂(θ) = y + Cθ/s, ∇f = Cᵀ(x̂ − x*)/s.
class IsotropicQuadratic final : public BilevelProblem {
 public:
  IsotropicQuadratic(double scale, Eigen::MatrixXd coupling, Eigen::VectorXd center,
                     Eigen::VectorXd target)
      : s_(scale), C_(std::move(coupling)), y_(std::move(center)), target_(std::move(target)) {}

  Dims dims() const override { return {C_.rows(), C_.cols()}; }
  double lower_value(const StateVector& x, const ParamVector& theta) const override {
    return 0.5 * s_ * (x - y_).squaredNorm() - x.dot(C_ * theta);
  }
  StateVector lower_grad(const StateVector& x, const ParamVector& theta) const override {
    return s_ * (x - y_) - C_ * theta;
  }
  StateVector lower_hvp(const StateVector&, const ParamVector&, const StateVector& v) const override {
    return s_ * v;
  }
  StateVector mixed_jvp(const StateVector&, const ParamVector&, const ParamVector& w) const override {
    return -(C_ * w);
  }
  ParamVector mixed_jvp_transpose(const StateVector&, const ParamVector&,
                                  const StateVector& v) const override {
    return -(C_.transpose() * v);
  }
  double upper_value(const StateVector& x) const override { return 0.5 * (x - target_).squaredNorm(); }
  StateVector upper_grad(const StateVector& x) const override { return x - target_; }
  double mu(const ParamVector&) const override { return s_; }
  double lip_lower(const ParamVector&) const override { return s_; }
  double lip_upper_grad() const override { return 1.0; }
  bool upper_is_convex() const override { return true; }

  StateVector x_hat(const ParamVector& theta) const { return y_ + C_ * theta / s_; }
  ParamVector grad_f(const ParamVector& theta) const {
    return C_.transpose() * (x_hat(theta) - target_) / s_;
  }

 private:
  double s_;
  Eigen::MatrixXd C_;
  Eigen::VectorXd y_;
  Eigen::VectorXd target_;
};

/// Forwards everything to `inner` except the Hessian-vector product, whose
/// sign is flipped: the seeded fault `maid check` must catch.
class FlippedHvp final : public BilevelProblem {
 public:
  explicit FlippedHvp(ProblemPtr inner) : inner_(std::move(inner)) {}

  Dims dims() const override { return inner_->dims(); }
  double lower_value(const StateVector& x, const ParamVector& t) const override {
    return inner_->lower_value(x, t);
  }
  StateVector lower_grad(const StateVector& x, const ParamVector& t) const override {
    return inner_->lower_grad(x, t);
  }
  StateVector lower_hvp(const StateVector& x, const ParamVector& t, const StateVector& v) const override {
    return -inner_->lower_hvp(x, t, v);
  }
  StateVector mixed_jvp(const StateVector& x, const ParamVector& t, const ParamVector& w) const override {
    return inner_->mixed_jvp(x, t, w);
  }
  ParamVector mixed_jvp_transpose(const StateVector& x, const ParamVector& t,
                                  const StateVector& v) const override {
    return inner_->mixed_jvp_transpose(x, t, v);
  }
  double upper_value(const StateVector& x) const override { return inner_->upper_value(x); }
  StateVector upper_grad(const StateVector& x) const override { return inner_->upper_grad(x); }
  double mu(const ParamVector& t) const override { return inner_->mu(t); }
  double lip_lower(const ParamVector& t) const override { return inner_->lip_lower(t); }
  double lip_upper_grad() const override { return inner_->lip_upper_grad(); }
  bool upper_is_convex() const override { return inner_->upper_is_convex(); }

 private:
  ProblemPtr inner_;
};

}  // namespace maid::testing
