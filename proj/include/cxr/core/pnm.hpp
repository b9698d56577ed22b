#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cxr/core/grid.hpp"

namespace cxr::pnm {

// 8-bit binary PGM (P5). maxval records the file's stated white level.
struct PgmImage {
  MaskGrid pixels;
  int maxval = 255;
};

PgmImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const MaskGrid& img, int maxval = 255);

// 8- or 16-bit grayscale P5 raster; two-byte samples are big-endian per the
// format convention.
struct GrayImage {
  Grid<uint16_t> pixels;
  int maxval = 255;
};

GrayImage read_gray_pgm(const std::filesystem::path& path);

// Interleaved 8-bit RGB, row-major.
struct RgbImage {
  int64_t h = 0, w = 0;
  std::vector<uint8_t> data;  // 3 * h * w

  RgbImage() = default;
  RgbImage(int64_t height, int64_t width) : h(height), w(width) {
    require(height > 0 && width > 0, Err::contract, "image dimensions must be positive");
    data.assign(static_cast<size_t>(3 * height * width), 0);
  }
  uint8_t* px(int64_t r, int64_t c) { return data.data() + 3 * (r * w + c); }
  const uint8_t* px(int64_t r, int64_t c) const { return data.data() + 3 * (r * w + c); }
};

RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace cxr::pnm
