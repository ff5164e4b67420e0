#pragma once

// Horizontal bar chart rendered to PNG, used for the genre histogram.
// Requires libpng.

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adtof/error.hpp"

namespace adtof::plot {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> rgb;

  Image(std::size_t w, std::size_t h) : width(w), height(h), rgb(w * h * 3, 255) {}

  void fill(std::size_t x0, std::size_t y0, std::size_t w, std::size_t h, std::array<std::uint8_t, 3> color) {
    for (std::size_t y = y0; y < std::min(height, y0 + h); ++y) {
      for (std::size_t x = x0; x < std::min(width, x0 + w); ++x) {
        std::copy(color.begin(), color.end(), rgb.begin() + static_cast<std::ptrdiff_t>((y * width + x) * 3));
      }
    }
  }
};

namespace detail {

// 5x7 glyphs, one byte per row, bit 4 is the leftmost column.
inline const std::array<std::uint8_t, 7>& glyph(char c) {
  static const std::map<char, std::array<std::uint8_t, 7>> kFont = {
      {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
      {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
      {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
      {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
      {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
      {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
      {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
      {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
      {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
      {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
      {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
      {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
      {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {' ', {0, 0, 0, 0, 0, 0, 0}},                      {'-', {0, 0, 0, 0x1F, 0, 0, 0}},
      {'.', {0, 0, 0, 0, 0, 0x0C, 0x0C}},                {'/', {0, 0x01, 0x02, 0x04, 0x08, 0x10, 0}},
      {'&', {0x0C, 0x12, 0x14, 0x08, 0x15, 0x12, 0x0D}}, {'+', {0, 0x04, 0x04, 0x1F, 0x04, 0x04, 0}},
      {'\'', {0x04, 0x04, 0, 0, 0, 0, 0}},               {'?', {0x0E, 0x11, 0x01, 0x02, 0x04, 0, 0x04}},
  };
  auto it = kFont.find(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return it != kFont.end() ? it->second : kFont.at('?');
}

inline void draw_text(Image& img, std::size_t x, std::size_t y, std::string_view s, std::size_t scale,
                      std::array<std::uint8_t, 3> color) {
  for (char c : s) {
    const auto& g = glyph(c);
    for (std::size_t row = 0; row < 7; ++row) {
      for (std::size_t col = 0; col < 5; ++col) {
        if (g[row] & (0x10 >> col)) img.fill(x + col * scale, y + row * scale, scale, scale, color);
      }
    }
    x += 6 * scale;
  }
}

}  // namespace detail

/// One bar per (label, count), in the given order.
inline Image render_bar_chart(const std::vector<std::pair<std::string, std::size_t>>& bars) {
  constexpr std::size_t kScale = 2, kRow = 24, kLabelChars = 16, kWidth = 800, kMargin = 8;
  const std::size_t label_w = kLabelChars * 6 * kScale + kMargin;
  const std::size_t count_w = 8 * 6 * kScale;
  Image img(kWidth, std::max<std::size_t>(1, bars.size()) * kRow + 2 * kMargin);
  std::size_t max_count = 1;
  for (const auto& [label, n] : bars) max_count = std::max(max_count, n);
  const std::size_t bar_area = kWidth - label_w - count_w - 2 * kMargin;

  std::size_t y = kMargin;
  for (const auto& [label, n] : bars) {
    std::string shown = label.substr(0, kLabelChars);
    detail::draw_text(img, kMargin, y + 5, shown, kScale, {40, 40, 40});
    std::size_t len = bar_area * n / max_count;
    img.fill(label_w, y + 3, std::max<std::size_t>(len, n ? 1 : 0), kRow - 6, {66, 110, 180});
    detail::draw_text(img, label_w + len + kMargin, y + 5, std::to_string(n), kScale, {40, 40, 40});
    y += kRow;
  }
  return img;
}

inline void write_png(const std::filesystem::path& path, const Image& img) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw Error(ErrorCode::Io, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw Error(ErrorCode::Io, "PNG encoding failed for " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(img.rgb.data() + y * img.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace adtof::plot
