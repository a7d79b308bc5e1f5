#include "maid/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "maid/random.hpp"
#include "maid/types.hpp"

namespace maid {

double psnr(const Eigen::Ref<const Eigen::VectorXd>& estimate,
            const Eigen::Ref<const Eigen::VectorXd>& reference) {
  if (estimate.size() != reference.size() || estimate.size() == 0) {
    throw ConfigError("psnr: size mismatch");
  }
  const double mse = (estimate - reference).squaredNorm() / static_cast<double>(estimate.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

TvDataset synth_tv_dataset(int width, int height, int count, double noise_sigma,
                           std::uint64_t seed) {
  if (width < 8 || height < 8) throw ConfigError("synth_tv_dataset: images must be at least 8x8");
  if (count < 1) throw ConfigError("synth_tv_dataset: count must be positive");
  if (!(noise_sigma >= 0.0)) throw ConfigError("synth_tv_dataset: noise_sigma must be non-negative");

  Rng shape_rng(derive_seed(seed, "tv_shapes"));
  Rng noise_rng(derive_seed(seed, "tv_noise"));
  std::uniform_real_distribution<double> level(0.0, 1.0);
  std::uniform_int_distribution<int> rect_count(3, 8);
  std::normal_distribution<double> noise(0.0, 1.0);

  TvDataset out;
  for (int t = 0; t < count; ++t) {
    Image clean(width, height);
    clean.pixels.setConstant(level(shape_rng));
    const int rects = rect_count(shape_rng);
    for (int k = 0; k < rects; ++k) {
      std::uniform_int_distribution<int> col(0, width - 2);
      std::uniform_int_distribution<int> row(0, height - 2);
      const int c0 = col(shape_rng);
      const int r0 = row(shape_rng);
      std::uniform_int_distribution<int> w(2, std::max(2, width - c0));
      std::uniform_int_distribution<int> h(2, std::max(2, height - r0));
      const int c1 = std::min(width, c0 + w(shape_rng));
      const int r1 = std::min(height, r0 + h(shape_rng));
      const double value = level(shape_rng);
      for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c) clean.at(r, c) = value;
    }
    Image noisy = clean;
    if (noise_sigma > 0.0) {
      for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy.pixels[i] += noise_sigma * noise(noise_rng);
    }
    out.ground_truth.push_back(std::move(clean));
    out.noisy.push_back(std::move(noisy));
  }
  return out;
}

}  // namespace maid
