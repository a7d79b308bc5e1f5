#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "maid/problem.hpp"

namespace maid {

/// Linear least-squares bilevel problem
///
///   min_θ ‖A₁x̂(θ) − b₁‖²   s.t.  x̂(θ) = argmin_x ‖A₂x + A₃θ − b₂‖².
///
/// Neither level carries a ½ factor, so ∇ₓh = 2A₂ᵀ(A₂x + A₃θ − b₂),
/// ∇²ₓh = 2A₂ᵀA₂, ∇²ₓθh = 2A₂ᵀA₃, and μ, L, L_∇g are the extreme eigenvalues
/// of 2A₂ᵀA₂ and 2A₁ᵀA₁. Lower-level products go through precomputed Gram
/// matrices; g is evaluated from the full residual.
class QuadraticBilevel final : public BilevelProblem, public ExactOracle {
 public:
  struct Synthesis {
    Eigen::Index rows = 1000;
    Eigen::Index n = 10;
    Eigen::Index d = 10;
    double noise = 0.01;
    std::uint64_t seed = 0;
  };

  /// Throws ConfigError if A₂ᵀA₂ is not positive definite or shapes disagree.
  QuadraticBilevel(Eigen::MatrixXd A1, Eigen::MatrixXd A2, Eigen::MatrixXd A3,
                   Eigen::VectorXd b1, Eigen::VectorXd b2);

  /// Uniform[0,1] matrices, b₁ = A₁x₁ + σy₁, b₂ = A₂x₂ + A₃θ̄ + σy₂ with
  /// x₁, x₂, θ̄ uniform[0,1] and y₁, y₂ standard normal.
  static QuadraticBilevel synthesize(const Synthesis& synth);

  Dims dims() const override { return {A2_.cols(), A3_.cols()}; }

  double lower_value(const StateVector& x, const ParamVector& theta) const override;
  StateVector lower_grad(const StateVector& x, const ParamVector& theta) const override;
  StateVector lower_hvp(const StateVector& x, const ParamVector& theta,
                        const StateVector& v) const override;
  StateVector mixed_jvp(const StateVector& x, const ParamVector& theta,
                        const ParamVector& w) const override;
  ParamVector mixed_jvp_transpose(const StateVector& x, const ParamVector& theta,
                                  const StateVector& v) const override;

  double upper_value(const StateVector& x) const override;
  StateVector upper_grad(const StateVector& x) const override;

  double mu(const ParamVector&) const override { return mu_; }
  double lip_lower(const ParamVector&) const override { return lip_; }
  double lip_upper_grad() const override { return lip_upper_; }
  bool upper_is_convex() const override { return true; }

  StateVector exact_lower_solution(const ParamVector& theta) const override;
  double exact_upper_value(const ParamVector& theta) const override;
  ParamVector exact_hypergradient(const ParamVector& theta) const override;

  /// Exact minimizer θ* of f (least-squares solve in θ).
  ParamVector exact_minimizer() const;
  /// Spectral norm of ∇²ₓθh = 2A₂ᵀA₃.
  double mixed_norm() const { return mixed_norm_; }
  /// Dense ∇²ₓh = 2A₂ᵀA₂ (test oracles only).
  Eigen::MatrixXd hessian() const { return 2.0 * gram22_; }
  Eigen::MatrixXd mixed_jacobian() const { return 2.0 * gram23_; }

  const Eigen::MatrixXd& A1() const { return A1_; }
  const Eigen::MatrixXd& A2() const { return A2_; }
  const Eigen::MatrixXd& A3() const { return A3_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const Eigen::VectorXd& b2() const { return b2_; }

 private:
  Eigen::MatrixXd A1_, A2_, A3_;
  Eigen::VectorXd b1_, b2_;
  Eigen::MatrixXd gram22_;   // A₂ᵀA₂
  Eigen::MatrixXd gram23_;   // A₂ᵀA₃
  Eigen::VectorXd a2t_b2_;   // A₂ᵀb₂
  Eigen::LLT<Eigen::MatrixXd> gram22_llt_;
  double mu_ = 0.0;
  double lip_ = 0.0;
  double lip_upper_ = 0.0;
  double mixed_norm_ = 0.0;
};

}  // namespace maid
