#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace maid {

/// Grayscale image with values nominally in [0, 1], stored row-major.
struct Image {
  int width = 0;
  int height = 0;
  Eigen::VectorXd pixels;

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(Eigen::VectorXd::Zero(Eigen::Index{w} * h)) {}

  Eigen::Index size() const { return pixels.size(); }
  double& at(int row, int col) { return pixels[Eigen::Index{row} * width + col]; }
  double at(int row, int col) const { return pixels[Eigen::Index{row} * width + col]; }
};

/// Peak signal-to-noise ratio in dB for peak value 1. Infinite for identical inputs.
double psnr(const Eigen::Ref<const Eigen::VectorXd>& estimate,
            const Eigen::Ref<const Eigen::VectorXd>& reference);

struct TvDataset {
  std::vector<Image> ground_truth;
  std::vector<Image> noisy;
};

/// Seeded piecewise-constant images (random axis-aligned rectangles over a
/// random background, values in [0,1]) plus additive N(0, σ²) noise.
/// Throws ConfigError if width or height is below 8.
TvDataset synth_tv_dataset(int width, int height, int count, double noise_sigma,
                           std::uint64_t seed);

}  // namespace maid
