#include "maid/budget.hpp"

#include <algorithm>

#include "maid/types.hpp"

namespace maid {

Budget::Budget(std::optional<std::int64_t> cap) : cap_(cap) {
  if (cap_ && *cap_ < 0) throw ConfigError("budget cap must be non-negative");
}

std::optional<std::int64_t> Budget::remaining() const {
  if (!cap_) return std::nullopt;
  return std::max<std::int64_t>(0, *cap_ - spent_);
}

void Budget::charge(std::int64_t units) {
  if (units < 0) throw ConfigError("budget charge must be non-negative");
  spent_ += units;
}

}  // namespace maid
