#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "maid/types.hpp"

namespace maid {

using Rng = std::mt19937_64;

/// Deterministic 64-bit seed derived from a root seed, a stream name and an index.
/// Every random draw in a run goes through a named substream so traces replay exactly.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

Eigen::VectorXd standard_normal(Eigen::Index size, Rng& rng);
/// Standard-normal draw rescaled to unit Euclidean norm.
Eigen::VectorXd random_unit_vector(Eigen::Index size, Rng& rng);

/// Counter-based source of named substream seeds for one solver run.
class SeedStreams {
 public:
  explicit SeedStreams(std::uint64_t root) : root_(root) {}

  std::uint64_t root() const { return root_; }
  /// Next seed on `stream`; each call advances a single shared counter.
  std::uint64_t next(std::string_view stream) { return derive_seed(root_, stream, counter_++); }

 private:
  std::uint64_t root_;
  std::uint64_t counter_ = 0;
};

}  // namespace maid
