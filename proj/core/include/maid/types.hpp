#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace maid {

/// Hyperparameters optimized by the upper level (length d).
using ParamVector = Eigen::VectorXd;
/// Lower-level variable (length n).
using StateVector = Eigen::VectorXd;

/// Raised when an evaluation produces NaN/Inf. The message names the operation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid solver or problem configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool all_finite(const Eigen::Ref<const Eigen::VectorXd>& v) { return v.allFinite(); }

/// Throws NumericalError naming `what` if `v` has a non-finite entry.
inline void require_finite(const Eigen::Ref<const Eigen::VectorXd>& v, const std::string& what) {
  if (!v.allFinite()) throw NumericalError("non-finite value in " + what);
}

inline void require_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value in " + what);
}

}  // namespace maid
