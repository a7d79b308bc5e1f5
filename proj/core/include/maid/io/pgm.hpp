#pragma once

#include <filesystem>

#include "maid/image.hpp"

namespace maid::io {

/// Reads a binary (P5) or ASCII (P2) PGM; pixels are divided by the max level.
/// Supports 8- and 16-bit data and '#' comments. Throws std::runtime_error.
Image read_pgm(const std::filesystem::path& path);

/// Writes an 8-bit binary P5 (or P2 when `ascii`), clamping pixels to [0, 1].
void write_pgm(const std::filesystem::path& path, const Image& image, bool ascii = false);

}  // namespace maid::io
