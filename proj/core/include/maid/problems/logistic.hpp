#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "maid/problem.hpp"

namespace maid {

/// Labelled samples: one feature row per sample, class ids in [0, classes).
struct ClassificationData {
  Eigen::MatrixXd features;  ///< samples × p
  std::vector<int> labels;
  int classes = 0;
};

/// Multinomial logistic regression with one exponential ℓ₂ penalty per weight:
///
///   h(x, θ) = Σⱼ Ψ(bⱼ, aⱼᵀx) + ½ Σᵢ e^{θᵢ} xᵢ²,     g(x) = Σᵢ Ψ(b̄ᵢ, āᵢᵀx),
///
/// where x is the p×q weight matrix flattened row-major (index k·q + l) and Ψ
/// is softmax cross-entropy. μ(θ) = min e^θ; L(θ) = max e^θ + ½λ_max(AᵀA).
class LogisticBilevel final : public BilevelProblem {
 public:
  /// Throws ConfigError on empty data, mismatched feature counts or labels
  /// outside [0, classes).
  LogisticBilevel(ClassificationData train, ClassificationData validation);

  Dims dims() const override { return {p_ * q_, p_ * q_}; }

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

  double mu(const ParamVector& theta) const override;
  double lip_lower(const ParamVector& theta) const override;
  double lip_upper_grad() const override { return lip_upper_; }
  bool upper_is_convex() const override { return true; }

  Eigen::Index features() const { return p_; }
  Eigen::Index classes() const { return q_; }

 private:
  Eigen::Index p_ = 0;
  Eigen::Index q_ = 0;
  ClassificationData train_;
  ClassificationData val_;
  double lip_data_ = 0.0;   // ½λ_max(AᵀA), training features
  double lip_upper_ = 0.0;  // ½λ_max(ĀᵀĀ), validation features
};

/// Gaussian class clusters: `classes` random centers in ℝᵖ (scaled by
/// `separation`), unit-variance features around them, uniform labels. Centers
/// depend on `seed` only, so splits drawn with different `sample_stream`
/// values share one distribution.
ClassificationData synth_classification(int samples, int features, int classes,
                                        double separation, std::uint64_t seed,
                                        std::uint64_t sample_stream = 0);

/// Softmax cross-entropy data loss Σ Ψ(b, aᵀx) and its gradient with respect to x.
double softmax_cross_entropy(const ClassificationData& data, const StateVector& x,
                             Eigen::Index classes, StateVector* grad);

}  // namespace maid
