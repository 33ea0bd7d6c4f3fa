// 8-bit grayscale images with dependency-free PGM I/O (ASCII P2 and
// binary P5, maxval <= 255).

#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "enmi/io.hpp"

namespace enmi {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("image: dimensions must be positive");
  }

  std::uint8_t& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(col)];
  }
  std::uint8_t at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                  static_cast<std::size_t>(col)];
  }
};

namespace detail {

// Next whitespace-delimited token, skipping '#' comments to end of line.
inline std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok += static_cast<char>(c);
  }
  if (tok.empty()) throw std::runtime_error("pgm: unexpected end of header");
  return tok;
}

inline int pnm_int(std::istream& in) {
  const std::string tok = pnm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("pgm: expected integer, got '" + tok + "'");
  }
}

}  // namespace detail

inline GrayImage read_pgm(std::istream& in) {
  const std::string magic = detail::pnm_token(in);
  if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: unsupported magic '" + magic + "'");
  const int width = detail::pnm_int(in);
  const int height = detail::pnm_int(in);
  const int maxval = detail::pnm_int(in);
  if (width <= 0 || height <= 0) throw std::runtime_error("pgm: bad dimensions");
  if (maxval <= 0 || maxval > 255) throw std::runtime_error("pgm: only 8-bit images supported");

  GrayImage img(width, height);
  const std::size_t n = img.pixels.size();
  if (magic == "P5") {
    // the tokenizer consumed the single whitespace after maxval, so the
    // stream already sits on the first raster byte
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) throw std::runtime_error("pgm: truncated raster");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = detail::pnm_int(in);
      if (v < 0 || v > maxval) throw std::runtime_error("pgm: sample out of range");
      img.pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path.string());
  return read_pgm(in);
}

inline std::string pgm_bytes(const GrayImage& img, bool binary = true) {
  std::ostringstream out;
  out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
  if (binary) {
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
  } else {
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        if (c) out << ' ';
        out << static_cast<int>(img.at(r, c));
      }
      out << '\n';
    }
  }
  return out.str();
}

inline void write_pgm(const GrayImage& img, const std::filesystem::path& path, bool binary = true) {
  atomic_write_file(path, pgm_bytes(img, binary));
}

}  // namespace enmi
