#pragma once

// Binary PGM (P5, maxval 255) reader and writer.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "roimark/error.hpp"
#include "roimark/image.hpp"

namespace roimark::pgm {

namespace detail {
inline void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

inline int read_int(std::istream& in, const char* field) {
  skip_space_and_comments(in);
  long v = 0;
  bool any = false;
  while (std::isdigit(in.peek())) {
    v = v * 10 + (in.get() - '0');
    any = true;
    if (v > 1'000'000) throw Error(ErrorCode::FormatError, std::string(field) + " too large");
  }
  if (!any) throw Error(ErrorCode::FormatError, std::string("missing ") + field);
  return static_cast<int>(v);
}
}  // namespace detail

inline GrayImage read(std::istream& in) {
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5') {
    throw Error(ErrorCode::FormatError, "not a binary PGM (P5)");
  }
  const int width = detail::read_int(in, "width");
  const int height = detail::read_int(in, "height");
  const int maxval = detail::read_int(in, "maxval");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::FormatError, "zero image dimension");
  if (maxval != 255) {
    throw Error(ErrorCode::FormatError,
                "only 8-bit PGM (maxval 255) is supported, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (!std::isspace(in.get())) throw Error(ErrorCode::FormatError, "malformed PGM header");
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  if (!in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()))) {
    throw Error(ErrorCode::FormatError, "truncated PGM raster");
  }
  return GrayImage(width, height, std::move(px));
}

inline void write(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  const auto px = image.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed writing PGM");
}

inline GrayImage load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read(in);
}

inline void save(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path.string());
  write(out, image);
}

}  // namespace roimark::pgm
