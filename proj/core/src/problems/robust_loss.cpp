#include "maid/problems/robust_loss.hpp"

namespace maid {

RobustLossWrapper::RobustLossWrapper(ProblemPtr inner, StateVector target, int blocks)
    : inner_(std::move(inner)), target_(std::move(target)), blocks_(blocks) {
  if (!inner_) throw ConfigError("RobustLossWrapper: null inner problem");
  if (blocks_ < 1) throw ConfigError("RobustLossWrapper: blocks must be positive");
  const Eigen::Index n = inner_->dims().n;
  if (target_.size() != n || n % blocks_ != 0) {
    throw ConfigError("RobustLossWrapper: target must match the state and split evenly into blocks");
  }
  block_size_ = n / blocks_;
}

double RobustLossWrapper::upper_value(const StateVector& x) const {
  double total = 0.0;
  for (int t = 0; t < blocks_; ++t) {
    const double s = (x.segment(t * block_size_, block_size_) -
                      target_.segment(t * block_size_, block_size_)).squaredNorm();
    total += s / (1.0 + s);
  }
  return total / blocks_;
}

StateVector RobustLossWrapper::upper_grad(const StateVector& x) const {
  StateVector grad(x.size());
  for (int t = 0; t < blocks_; ++t) {
    const auto r = (x.segment(t * block_size_, block_size_) -
                    target_.segment(t * block_size_, block_size_)).eval();
    const double s = r.squaredNorm();
    grad.segment(t * block_size_, block_size_) = (2.0 / ((1.0 + s) * (1.0 + s) * blocks_)) * r;
  }
  return grad;
}

}  // namespace maid
