#pragma once

#include <cstdint>
#include <memory>

#include "maid/experiment/config.hpp"
#include "maid/problem.hpp"
#include "maid/problems/tv_denoise.hpp"

namespace maid::experiment {

/// A constructed problem with its starting point. `oracle` is set for
/// problems with a closed-form solution, `tv` for TV denoising instances.
struct Instance {
  ProblemPtr problem;
  ParamVector theta0;
  std::shared_ptr<const ExactOracle> oracle;
  std::shared_ptr<const TVDenoise> tv;
  std::uint64_t data_seed = 0;
};

/// Data seed: the problem's own `seed` if set, otherwise derived from the root.
std::uint64_t data_seed_for(const ProblemConfig& config, std::uint64_t root_seed);

/// Builds the instance described by `config`. Missing input files throw
/// ConfigError; unreadable or malformed ones throw std::runtime_error.
/// Default starting points: all-ones (quadratic), (−5, −5) (tv), zeros (logistic).
Instance build_instance(const ProblemConfig& config, std::uint64_t root_seed,
                        const std::optional<std::vector<double>>& theta0 = std::nullopt);

}  // namespace maid::experiment
