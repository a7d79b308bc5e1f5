#include "maid/io/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace maid::io {
namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string token;
  while (in) {
    const int c = in.peek();
    if (c == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  in >> token;
  return token;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
  const std::string token = header_token(in);
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size() || value <= 0) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed PGM header in " + path.string());
  }
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  const std::string magic = header_token(in);
  if (magic != "P2" && magic != "P5") throw std::runtime_error("not a P2/P5 PGM: " + path.string());
  const int width = header_int(in, path);
  const int height = header_int(in, path);
  const int max_level = header_int(in, path);
  if (max_level > 65535) throw std::runtime_error("PGM max level too large in " + path.string());

  Image img(width, height);
  const double scale = 1.0 / max_level;
  if (magic == "P2") {
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      int v = 0;
      if (!(in >> v)) throw std::runtime_error("truncated PGM data in " + path.string());
      if (v < 0 || v > max_level) throw std::runtime_error("PGM level out of range in " + path.string());
      img.pixels[i] = v * scale;
    }
  } else {
    in.get();  // single whitespace byte after the header
    const int bytes_per = max_level < 256 ? 1 : 2;
    std::string raw(static_cast<std::size_t>(img.size() * bytes_per), '\0');
    if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) {
      throw std::runtime_error("truncated PGM data in " + path.string());
    }
    for (Eigen::Index i = 0; i < img.size(); ++i) {
      const auto* p = reinterpret_cast<const unsigned char*>(raw.data()) + i * bytes_per;
      const int v = bytes_per == 1 ? p[0] : (p[0] << 8) | p[1];
      if (v > max_level) throw std::runtime_error("PGM level out of range in " + path.string());
      img.pixels[i] = v * scale;
    }
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const Image& image, bool ascii) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (ascii ? "P2" : "P5") << '\n' << image.width << ' ' << image.height << "\n255\n";
  for (Eigen::Index i = 0; i < image.size(); ++i) {
    const int v = static_cast<int>(std::lround(std::clamp(image.pixels[i], 0.0, 1.0) * 255.0));
    if (ascii) {
      out << v << ((i + 1) % image.width == 0 ? '\n' : ' ');
    } else {
      out.put(static_cast<char>(v));
    }
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace maid::io
