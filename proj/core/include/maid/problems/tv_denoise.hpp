#pragma once

#include <vector>

#include "maid/image.hpp"
#include "maid/problem.hpp"

namespace maid {

/// Smoothed-TV denoising of m images, θ = (log weight, log smoothing):
///
///   h(x, θ) = Σₜ ½‖xₜ − yₜ‖² + e^{θ₀} Σ_pixels √(|∂ₕxₜ|² + |∂ᵥxₜ|² + e^{2θ₁}),
///   g(x)    = (1/m) Σₜ ½‖xₜ − x*ₜ‖².
///
/// Forward differences with replicate boundaries (the last column/row
/// difference is zero). μ = 1 and L(θ) = 1 + 8e^{θ₀}/e^{θ₁}.
class TVDenoise final : public BilevelProblem {
 public:
  /// `noisy` and `truth` must be non-empty, of equal length, and share one size.
  TVDenoise(std::vector<Image> noisy, std::vector<Image> truth);

  Dims dims() const override { return {n_, 2}; }

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

  double mu(const ParamVector&) const override { return 1.0; }
  double lip_lower(const ParamVector& theta) const override;
  double lip_upper_grad() const override { return 1.0 / static_cast<double>(count_); }
  bool upper_is_convex() const override { return true; }

  /// Noisy data: the natural cold start.
  StateVector initial_state(const ParamVector&) const override { return y_; }

  int width() const { return width_; }
  int height() const { return height_; }
  int image_count() const { return count_; }
  const StateVector& noisy() const { return y_; }
  const StateVector& truth() const { return truth_; }

  /// Splits a stacked state back into images.
  std::vector<Image> unstack(const StateVector& x) const;

 private:
  // Both columns of ∇²ₓθh at (x, θ).
  void mixed_columns(const StateVector& x, const ParamVector& theta, StateVector& c0,
                     StateVector& c1) const;

  int width_ = 0;
  int height_ = 0;
  int count_ = 0;
  Eigen::Index n_ = 0;
  StateVector y_;
  StateVector truth_;
};

}  // namespace maid
