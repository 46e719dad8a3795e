#pragma once

#include <png.h>

#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sgmorph/core/error.hpp"
#include "sgmorph/ingest/skeleton.hpp"

namespace sgmorph {

/// PGM (P2 ascii / P5 binary); any nonzero gray value is foreground.
inline SkeletonMask read_pgm(const std::string& content) {
  std::istringstream in(content);
  const auto next_token = [&]() -> std::string {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw parse_error("unexpected end of PGM header");
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") throw parse_error("not a PGM file (P2/P5)");
  SkeletonMask mask;
  mask.width = std::stoi(next_token());
  mask.height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (mask.width <= 0 || mask.height <= 0 || maxval <= 0 || maxval > 65535)
    throw parse_error("invalid PGM dimensions");
  const std::size_t n = static_cast<std::size_t>(mask.width) * mask.height;
  mask.pixels.assign(n, 0);
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = std::stoi(next_token());
      mask.pixels[i] = v != 0;
    }
  } else {
    in.get();  // the single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<char> raw(n * bytes);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
      throw parse_error("truncated PGM pixel data");
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned v = bytes == 1
                             ? static_cast<unsigned char>(raw[i])
                             : (static_cast<unsigned char>(raw[2 * i]) << 8 |
                                static_cast<unsigned char>(raw[2 * i + 1]));
      mask.pixels[i] = v != 0;
    }
  }
  return mask;
}

inline std::string write_pgm(const SkeletonMask& mask) {
  std::ostringstream out;
  out << "P2\n" << mask.width << " " << mask.height << "\n1\n";
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x)
      out << (mask.at(x, y) ? 1 : 0) << (x + 1 < mask.width ? " " : "");
    out << "\n";
  }
  return out.str();
}

/// PNG of any color type; a pixel is foreground when any of its non-alpha
/// channels is nonzero.
inline SkeletonMask read_png_file(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"),
                                                     &std::fclose);
  if (!fp) throw parse_error("cannot open PNG file '" + path + "'");
  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw parse_error("'" + path + "' is not a PNG file");

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    throw parse_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw parse_error("libpng failed to decode '" + path + "'");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_png(png, info,
               PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_PACKING | PNG_TRANSFORM_EXPAND,
               nullptr);

  SkeletonMask mask;
  mask.width = static_cast<int>(png_get_image_width(png, info));
  mask.height = static_cast<int>(png_get_image_height(png, info));
  const png_uint_32 channels = png_get_channels(png, info);
  const int color_type = png_get_color_type(png, info);
  const bool has_alpha =
      color_type == PNG_COLOR_TYPE_GRAY_ALPHA || color_type == PNG_COLOR_TYPE_RGB_ALPHA;
  const png_uint_32 value_channels = has_alpha ? channels - 1 : channels;

  mask.pixels.assign(static_cast<std::size_t>(mask.width) * mask.height, 0);
  png_bytepp rows = png_get_rows(png, info);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      bool on = false;
      for (png_uint_32 c = 0; c < value_channels; ++c)
        on |= rows[y][x * channels + c] != 0;
      mask.pixels[static_cast<std::size_t>(y) * mask.width + x] = on;
    }
  png_destroy_read_struct(&png, &info, nullptr);
  return mask;
}

}  // namespace sgmorph
