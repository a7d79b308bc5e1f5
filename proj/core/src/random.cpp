#include "maid/random.hpp"

namespace maid {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; std::hash is not stable across implementations.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
  return splitmix64(splitmix64(root ^ fnv1a(stream)) + index);
}

Eigen::VectorXd standard_normal(Eigen::Index size, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd random_unit_vector(Eigen::Index size, Rng& rng) {
  Eigen::VectorXd v = standard_normal(size, rng);
  double norm = v.norm();
  while (norm == 0.0) {
    v = standard_normal(size, rng);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace maid
