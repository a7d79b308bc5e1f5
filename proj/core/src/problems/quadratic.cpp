#include "maid/problems/quadratic.hpp"

#include <random>

#include <Eigen/Eigenvalues>

#include "maid/random.hpp"

namespace maid {
namespace {

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = unif(rng);
  return m;
}

}  // namespace

QuadraticBilevel::QuadraticBilevel(Eigen::MatrixXd A1, Eigen::MatrixXd A2, Eigen::MatrixXd A3,
                                   Eigen::VectorXd b1, Eigen::VectorXd b2)
    : A1_(std::move(A1)), A2_(std::move(A2)), A3_(std::move(A3)), b1_(std::move(b1)), b2_(std::move(b2)) {
  if (A1_.cols() != A2_.cols() || A2_.rows() != A3_.rows() || A1_.rows() != b1_.size() ||
      A2_.rows() != b2_.size()) {
    throw ConfigError("QuadraticBilevel: inconsistent matrix shapes");
  }
  gram22_ = A2_.transpose() * A2_;
  gram23_ = A2_.transpose() * A3_;
  a2t_b2_ = A2_.transpose() * b2_;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig22(gram22_, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = eig22.eigenvalues();
  if (!(ev.minCoeff() > 1e-12 * std::max(1.0, ev.maxCoeff()))) {
    throw ConfigError("QuadraticBilevel: A2^T A2 is not positive definite");
  }
  mu_ = 2.0 * ev.minCoeff();
  lip_ = 2.0 * ev.maxCoeff();
  gram22_llt_.compute(gram22_);

  const Eigen::MatrixXd gram11 = A1_.transpose() * A1_;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig11(gram11, Eigen::EigenvaluesOnly);
  lip_upper_ = 2.0 * eig11.eigenvalues().maxCoeff();
  if (!(lip_upper_ > 0.0)) throw ConfigError("QuadraticBilevel: A1 must be non-zero");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(mixed_jacobian());
  mixed_norm_ = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

QuadraticBilevel QuadraticBilevel::synthesize(const Synthesis& synth) {
  if (synth.rows < 1 || synth.n < 1 || synth.d < 1) throw ConfigError("QuadraticBilevel: empty dimensions");
  Rng rng(derive_seed(synth.seed, "quadratic_data"));
  Eigen::MatrixXd A1 = uniform_matrix(synth.rows, synth.n, rng);
  Eigen::MatrixXd A2 = uniform_matrix(synth.rows, synth.n, rng);
  Eigen::MatrixXd A3 = uniform_matrix(synth.rows, synth.d, rng);
  const Eigen::VectorXd x1 = uniform_matrix(synth.n, 1, rng);
  const Eigen::VectorXd x2 = uniform_matrix(synth.n, 1, rng);
  const Eigen::VectorXd theta_bar = uniform_matrix(synth.d, 1, rng);
  const Eigen::VectorXd y1 = standard_normal(synth.rows, rng);
  const Eigen::VectorXd y2 = standard_normal(synth.rows, rng);
  Eigen::VectorXd b1 = A1 * x1 + synth.noise * y1;
  Eigen::VectorXd b2 = A2 * x2 + A3 * theta_bar + synth.noise * y2;
  return QuadraticBilevel(std::move(A1), std::move(A2), std::move(A3), std::move(b1), std::move(b2));
}

double QuadraticBilevel::lower_value(const StateVector& x, const ParamVector& theta) const {
  return (A2_ * x + A3_ * theta - b2_).squaredNorm();
}

StateVector QuadraticBilevel::lower_grad(const StateVector& x, const ParamVector& theta) const {
  return 2.0 * (gram22_ * x + gram23_ * theta - a2t_b2_);
}

StateVector QuadraticBilevel::lower_hvp(const StateVector&, const ParamVector&,
                                        const StateVector& v) const {
  return 2.0 * (gram22_ * v);
}

StateVector QuadraticBilevel::mixed_jvp(const StateVector&, const ParamVector&,
                                        const ParamVector& w) const {
  return 2.0 * (gram23_ * w);
}

ParamVector QuadraticBilevel::mixed_jvp_transpose(const StateVector&, const ParamVector&,
                                                  const StateVector& v) const {
  return 2.0 * (gram23_.transpose() * v);
}

double QuadraticBilevel::upper_value(const StateVector& x) const {
  return (A1_ * x - b1_).squaredNorm();
}

StateVector QuadraticBilevel::upper_grad(const StateVector& x) const {
  return 2.0 * (A1_.transpose() * (A1_ * x - b1_));
}

StateVector QuadraticBilevel::exact_lower_solution(const ParamVector& theta) const {
  return gram22_llt_.solve(a2t_b2_ - gram23_ * theta);
}

double QuadraticBilevel::exact_upper_value(const ParamVector& theta) const {
  return upper_value(exact_lower_solution(theta));
}

ParamVector QuadraticBilevel::exact_hypergradient(const ParamVector& theta) const {
  const StateVector x_hat = exact_lower_solution(theta);
  const StateVector grad_g = upper_grad(x_hat);
  return -(gram23_.transpose() * gram22_llt_.solve(grad_g));
}

ParamVector QuadraticBilevel::exact_minimizer() const {
  // x̂(θ) = c − Mθ, so f(θ) = ‖(A₁c − b₁) − A₁Mθ‖²: a linear least-squares problem in θ.
  const Eigen::MatrixXd M = gram22_llt_.solve(gram23_);
  const Eigen::VectorXd c = gram22_llt_.solve(a2t_b2_);
  const Eigen::MatrixXd P = A1_ * M;
  return P.colPivHouseholderQr().solve(A1_ * c - b1_);
}

}  // namespace maid
