#pragma once

#include <cstdint>
#include <optional>

namespace maid {

/// Lower-level cost ledger.
///
/// One unit is one lower-level gradient evaluation, one Hessian-vector product
/// or one mixed-Jacobian-vector product. Solvers test `exhausted()` before an
/// evaluation and `charge()` after it, so `spent()` exceeds the cap by at most
/// the units of the single call that crossed it.
class Budget {
 public:
  Budget() = default;
  explicit Budget(std::optional<std::int64_t> cap);

  static Budget unlimited() { return Budget{}; }

  std::optional<std::int64_t> cap() const { return cap_; }
  std::int64_t spent() const { return spent_; }
  bool exhausted() const { return cap_.has_value() && spent_ >= *cap_; }
  /// Units left before the cap; nullopt when unlimited.
  std::optional<std::int64_t> remaining() const;

  void charge(std::int64_t units = 1);

 private:
  std::optional<std::int64_t> cap_;
  std::int64_t spent_ = 0;
};

}  // namespace maid
