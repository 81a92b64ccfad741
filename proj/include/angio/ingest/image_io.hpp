/* Copyright 2026 The angiopipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "angio/core/error.hpp"
#include "angio/ingest/frame.hpp"

namespace angio::image_io {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void png_error_handler(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  if (err) *err = msg;
  png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

inline Frame read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  require(fp != nullptr, "cannot open image " + path.string(), ErrorKind::kIo);

  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_error_handler,
                                           png_warning_handler);
  require(png != nullptr, "png: out of memory", ErrorKind::kIo);
  png_infop info = png_create_info_struct(png);
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
  bool color = false;
  bool wrong_depth = false;
  std::vector<png_bytep> rows;
  // Every object with a destructor is constructed before setjmp.
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorKind::kIo, "unreadable PNG " + path.string() + ": " + err);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  color = color_type != PNG_COLOR_TYPE_GRAY;
  wrong_depth = depth != 8;
  if (!color && !wrong_depth) {
    pixels.resize(static_cast<std::size_t>(width) * height);
    rows.resize(height);
    for (int y = 0; y < height; ++y)
      rows[y] = pixels.data() + static_cast<std::size_t>(y) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  require(!color, "color image rejected (8-bit grayscale required): " +
                      path.string(),
          ErrorKind::kInvalidInput);
  require(!wrong_depth, "unsupported bit depth (8-bit required): " +
                            path.string(),
          ErrorKind::kInvalidInput);
  return Frame(width, height, std::move(pixels));
}

inline void skip_pnm_space(std::istream& in) {
  while (true) {
    int c = in.peek();
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

inline Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open image " + path.string(), ErrorKind::kIo);
  std::string magic;
  in >> magic;
  require(magic == "P5" || magic == "P2" || magic == "P6" || magic == "P3",
          "unreadable PGM " + path.string(), ErrorKind::kIo);
  require(magic == "P5" || magic == "P2",
          "color image rejected (8-bit grayscale required): " + path.string(),
          ErrorKind::kInvalidInput);
  int width = 0, height = 0, maxval = 0;
  skip_pnm_space(in);
  in >> width;
  skip_pnm_space(in);
  in >> height;
  skip_pnm_space(in);
  in >> maxval;
  require(in.good() && width > 0 && height > 0,
          "unreadable PGM header " + path.string(), ErrorKind::kIo);
  require(maxval == 255, "unsupported PGM maxval (8-bit required): " +
                             path.string(),
          ErrorKind::kInvalidInput);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height);
  if (magic == "P5") {
    in.get();  // single whitespace after maxval
    in.read(reinterpret_cast<char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
    require(in.gcount() == static_cast<std::streamsize>(pixels.size()),
            "truncated PGM " + path.string(), ErrorKind::kIo);
  } else {
    for (auto& p : pixels) {
      int v;
      in >> v;
      require(in.good() || in.eof(), "truncated PGM " + path.string(),
              ErrorKind::kIo);
      require(v >= 0 && v <= 255, "PGM value out of range " + path.string(),
              ErrorKind::kIo);
      p = static_cast<std::uint8_t>(v);
    }
  }
  return Frame(width, height, std::move(pixels));
}

inline void write_png(const std::filesystem::path& path, int width, int height,
                      int channels, const std::uint8_t* data) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  require(fp != nullptr, "cannot write image " + path.string(), ErrorKind::kIo);
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            png_error_handler,
                                            png_warning_handler);
  require(png != nullptr, "png: out of memory", ErrorKind::kIo);
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(data) +
              static_cast<std::size_t>(y) * width * channels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorKind::kIo, "PNG write failed " + path.string() + ": " + err);
  }
  png_init_io(png, fp.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

inline bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

}  // namespace detail

/// Reads an 8-bit grayscale PNG or PGM (P5/P2), sniffing the format from the
/// file contents. Color images are rejected, never converted.
inline Frame read_gray(const std::filesystem::path& path) {
  require(std::filesystem::exists(path), "missing frame " + path.string(),
          ErrorKind::kIo);
  if (detail::has_png_signature(path)) return detail::read_png(path);
  return detail::read_pgm(path);
}

inline void write_pgm(const std::filesystem::path& path, const Frame& f) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write image " + path.string(), ErrorKind::kIo);
  out << "P5\n" << f.width() << ' ' << f.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(f.pixels().data()),
            static_cast<std::streamsize>(f.pixels().size()));
  require(out.good(), "write failed " + path.string(), ErrorKind::kIo);
}

inline void write_png(const std::filesystem::path& path, const Frame& f) {
  detail::write_png(path, f.width(), f.height(), 1, f.pixels().data());
}

/// Writes PNG or PGM depending on the extension (.pgm -> PGM, else PNG).
inline void write_gray(const std::filesystem::path& path, const Frame& f) {
  if (path.extension() == ".pgm")
    write_pgm(path, f);
  else
    write_png(path, f);
}

/// 8-bit RGB image for overlays.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // width * height * 3

  static RgbImage from_gray(const Frame& f) {
    RgbImage img{f.width(), f.height(), {}};
    img.rgb.reserve(f.pixels().size() * 3);
    for (auto p : f.pixels()) {
      img.rgb.push_back(p);
      img.rgb.push_back(p);
      img.rgb.push_back(p);
    }
    return img;
  }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    auto* p = &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }
};

inline void write_png(const std::filesystem::path& path, const RgbImage& img) {
  detail::write_png(path, img.width, img.height, 3, img.rgb.data());
}

}  // namespace angio::image_io
