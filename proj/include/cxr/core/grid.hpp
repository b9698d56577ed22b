#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "cxr/common.hpp"

namespace cxr {

// Row-major 2-D image plane. Pixel (r=0, c=0) is the top-left corner.
template <typename T>
struct Grid {
  int64_t h = 0, w = 0;
  std::vector<T> data;

  Grid() = default;
  Grid(int64_t height, int64_t width, T fill = T{}) : h(height), w(width) {
    require(height > 0 && width > 0, Err::contract, "grid dimensions must be positive");
    data.assign(static_cast<size_t>(height * width), fill);
  }

  int64_t numel() const { return h * w; }
  bool same_shape(const Grid& o) const { return h == o.h && w == o.w; }
  bool in_bounds(int64_t r, int64_t c) const { return r >= 0 && r < h && c >= 0 && c < w; }

  T& operator()(int64_t r, int64_t c) { return data[static_cast<size_t>(r * w + c)]; }
  const T& operator()(int64_t r, int64_t c) const { return data[static_cast<size_t>(r * w + c)]; }

  T& at(int64_t r, int64_t c) {
    require(in_bounds(r, c), Err::contract, "grid index out of bounds");
    return (*this)(r, c);
  }
  const T& at(int64_t r, int64_t c) const {
    require(in_bounds(r, c), Err::contract, "grid index out of bounds");
    return (*this)(r, c);
  }
};

using MaskGrid = Grid<uint8_t>;

namespace detail {

// Source coordinate for destination index i under pixel-center alignment:
// src = (dst + 0.5) * (in/out) - 0.5, clamped into the valid range.
inline double src_coord(int64_t i, int64_t out_n, int64_t in_n) {
  const double s = (double(i) + 0.5) * double(in_n) / double(out_n) - 0.5;
  return std::clamp(s, 0.0, double(in_n - 1));
}

struct Tap {
  int64_t lo, hi;
  float frac;
};

inline std::vector<Tap> make_taps(int64_t out_n, int64_t in_n) {
  std::vector<Tap> taps(static_cast<size_t>(out_n));
  for (int64_t i = 0; i < out_n; ++i) {
    const double s = src_coord(i, out_n, in_n);
    const int64_t lo = static_cast<int64_t>(std::floor(s));
    taps[static_cast<size_t>(i)] = {lo, std::min(lo + 1, in_n - 1),
                                    static_cast<float>(s - double(lo))};
  }
  return taps;
}

inline float lerp(float a, float b, float f) { return a + f * (b - a); }

}  // namespace detail

// Separable bilinear resample; constant images stay constant bit-for-bit
// because the lerp is written in a + f*(b-a) form.
inline Grid<float> resize_bilinear(const Grid<float>& src, int64_t oh, int64_t ow) {
  require(oh > 0 && ow > 0, Err::contract, "target size must be positive");
  require(src.h > 0 && src.w > 0, Err::degenerate_input, "empty source grid");
  if (oh == src.h && ow == src.w) return src;

  const auto col_taps = detail::make_taps(ow, src.w);
  Grid<float> tmp(src.h, ow);
  for (int64_t r = 0; r < src.h; ++r) {
    const float* row = src.data.data() + r * src.w;
    float* out = tmp.data.data() + r * ow;
    for (int64_t c = 0; c < ow; ++c) {
      const auto& t = col_taps[static_cast<size_t>(c)];
      out[c] = detail::lerp(row[t.lo], row[t.hi], t.frac);
    }
  }

  const auto row_taps = detail::make_taps(oh, src.h);
  Grid<float> dst(oh, ow);
  for (int64_t r = 0; r < oh; ++r) {
    const auto& t = row_taps[static_cast<size_t>(r)];
    const float* lo = tmp.data.data() + t.lo * ow;
    const float* hi = tmp.data.data() + t.hi * ow;
    float* out = dst.data.data() + r * ow;
    for (int64_t c = 0; c < ow; ++c) out[c] = detail::lerp(lo[c], hi[c], t.frac);
  }
  return dst;
}

// Nearest-neighbour resample under the same pixel-center alignment; values
// are copied, never blended, so label grids stay label grids.
template <typename T>
Grid<T> resize_nearest(const Grid<T>& src, int64_t oh, int64_t ow) {
  require(oh > 0 && ow > 0, Err::contract, "target size must be positive");
  require(src.h > 0 && src.w > 0, Err::degenerate_input, "empty source grid");
  if (oh == src.h && ow == src.w) return src;

  std::vector<int64_t> col_idx(static_cast<size_t>(ow));
  for (int64_t c = 0; c < ow; ++c)
    col_idx[static_cast<size_t>(c)] =
        static_cast<int64_t>(std::lround(detail::src_coord(c, ow, src.w)));
  Grid<T> dst(oh, ow);
  for (int64_t r = 0; r < oh; ++r) {
    const int64_t sr = static_cast<int64_t>(std::lround(detail::src_coord(r, oh, src.h)));
    const T* row = src.data.data() + sr * src.w;
    T* out = dst.data.data() + r * ow;
    for (int64_t c = 0; c < ow; ++c) out[c] = row[col_idx[static_cast<size_t>(c)]];
  }
  return dst;
}

// 2x3 affine map taking OUTPUT pixel coordinates (x=col, y=row) to SOURCE
// coordinates: src_x = m0*x + m1*y + m2, src_y = m3*x + m4*y + m5.
struct Affine {
  double m[6] = {1, 0, 0, 0, 1, 0};

  static Affine identity() { return {}; }
  static Affine translation(double tx, double ty) { return {{1, 0, tx, 0, 1, ty}}; }
  static Affine rotation_about(double cx, double cy, double radians) {
    const double c = std::cos(radians), s = std::sin(radians);
    return {{c, -s, cx - c * cx + s * cy, s, c, cy - s * cx - c * cy}};
  }
  static Affine scale_about(double cx, double cy, double k) {
    return {{k, 0, cx * (1 - k), 0, k, cy * (1 - k)}};
  }

  // a.compose(b): apply b first, then a.
  Affine compose(const Affine& b) const {
    const double* a = m;
    return {{a[0] * b.m[0] + a[1] * b.m[3], a[0] * b.m[1] + a[1] * b.m[4],
             a[0] * b.m[2] + a[1] * b.m[5] + a[2], a[3] * b.m[0] + a[4] * b.m[3],
             a[3] * b.m[1] + a[4] * b.m[4], a[3] * b.m[2] + a[4] * b.m[5] + a[5]}};
  }

  Affine invert() const {
    const double det = m[0] * m[4] - m[1] * m[3];
    require(std::fabs(det) > 1e-12, Err::degenerate_input, "affine transform is singular");
    const double i0 = m[4] / det, i1 = -m[1] / det, i3 = -m[3] / det, i4 = m[0] / det;
    return {{i0, i1, -(i0 * m[2] + i1 * m[5]), i3, i4, -(i3 * m[2] + i4 * m[5])}};
  }

  void apply(double x, double y, double& sx, double& sy) const {
    sx = m[0] * x + m[1] * y + m[2];
    sy = m[3] * x + m[4] * y + m[5];
  }
};

// Bilinear warp with zero fill outside the source frame. Integer-translation
// maps land exactly on source pixels and copy them unchanged.
inline Grid<float> warp_affine_bilinear(const Grid<float>& src, const Affine& out_to_src) {
  Grid<float> dst(src.h, src.w, 0.0f);
  for (int64_t r = 0; r < src.h; ++r) {
    for (int64_t c = 0; c < src.w; ++c) {
      double sx, sy;
      out_to_src.apply(double(c), double(r), sx, sy);
      if (sx < 0.0 || sy < 0.0 || sx > double(src.w - 1) || sy > double(src.h - 1)) continue;
      const int64_t x0 = static_cast<int64_t>(std::floor(sx));
      const int64_t y0 = static_cast<int64_t>(std::floor(sy));
      const int64_t x1 = std::min(x0 + 1, src.w - 1);
      const int64_t y1 = std::min(y0 + 1, src.h - 1);
      const float fx = static_cast<float>(sx - double(x0));
      const float fy = static_cast<float>(sy - double(y0));
      const float top = detail::lerp(src(y0, x0), src(y0, x1), fx);
      const float bot = detail::lerp(src(y1, x0), src(y1, x1), fx);
      dst(r, c) = detail::lerp(top, bot, fy);
    }
  }
  return dst;
}

// Nearest-neighbour warp with zero fill; keeps label values intact.
template <typename T>
Grid<T> warp_affine_nearest(const Grid<T>& src, const Affine& out_to_src) {
  Grid<T> dst(src.h, src.w, T{});
  for (int64_t r = 0; r < src.h; ++r) {
    for (int64_t c = 0; c < src.w; ++c) {
      double sx, sy;
      out_to_src.apply(double(c), double(r), sx, sy);
      const int64_t x = static_cast<int64_t>(std::lround(sx));
      const int64_t y = static_cast<int64_t>(std::lround(sy));
      if (x < 0 || y < 0 || x >= src.w || y >= src.h) continue;
      dst(r, c) = src(y, x);
    }
  }
  return dst;
}

}  // namespace cxr
