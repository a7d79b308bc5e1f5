#pragma once

#include <filesystem>
#include <istream>

#include "maid/problems/logistic.hpp"

namespace maid::io {

/// CSV with a header row and an integer `label` column; every other column is a
/// real feature. `classes` ≤ 0 infers max(label) + 1. Throws std::runtime_error
/// on malformed rows or labels outside [0, classes).
ClassificationData read_classification_csv(std::istream& in, int classes = 0);
ClassificationData read_classification_csv(const std::filesystem::path& path, int classes = 0);

}  // namespace maid::io
