#pragma once

// Reference computations that share no code with the library: dense
// least-squares solves, explicit matrices and plain central differences.

#include <functional>

#include <Eigen/Dense>

#include "maid/problems/quadratic.hpp"

namespace maid::testing {

/// Closed-form solution of the linear least-squares bilevel problem, computed
/// by QR on the raw matrices.
class LeastSquaresOracle {
 public:
  explicit LeastSquaresOracle(const QuadraticBilevel& problem)
      : A1_(problem.A1()), A2_(problem.A2()), A3_(problem.A3()), b1_(problem.b1()),
        b2_(problem.b2()), qr_(A2_) {}

  /// argmin_x ‖A₂x + A₃θ − b₂‖²
  Eigen::VectorXd x_hat(const Eigen::VectorXd& theta) const { return qr_.solve(b2_ - A3_ * theta); }

  double f(const Eigen::VectorXd& theta) const { return (A1_ * x_hat(theta) - b1_).squaredNorm(); }

  /// ∇f = (dx̂/dθ)ᵀ·2A₁ᵀ(A₁x̂ − b₁) with dx̂/dθ = −A₂⁺A₃.
  Eigen::VectorXd grad_f(const Eigen::VectorXd& theta) const {
    const Eigen::MatrixXd dx = -qr_.solve(A3_);
    return dx.transpose() * (2.0 * A1_.transpose() * (A1_ * x_hat(theta) - b1_));
  }

  Eigen::MatrixXd hessian() const { return 2.0 * A2_.transpose() * A2_; }
  Eigen::MatrixXd mixed() const { return 2.0 * A2_.transpose() * A3_; }
  Eigen::MatrixXd upper_hessian() const { return 2.0 * A1_.transpose() * A1_; }

 private:
  Eigen::MatrixXd A1_, A2_, A3_;
  Eigen::VectorXd b1_, b2_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

inline double spectral_norm(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

/// Central-difference gradient of a scalar function with a fixed step.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& fn,
                                        const Eigen::VectorXd& at, double step = 1e-5) {
  Eigen::VectorXd out(at.size());
  for (Eigen::Index i = 0; i < at.size(); ++i) {
    Eigen::VectorXd hi = at;
    Eigen::VectorXd lo = at;
    hi[i] += step;
    lo[i] -= step;
    out[i] = (fn(hi) - fn(lo)) / (2.0 * step);
  }
  return out;
}

inline double rel_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1.0});
}

}  // namespace maid::testing
