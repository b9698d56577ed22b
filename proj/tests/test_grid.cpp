#include <cmath>
#include <numbers>

#include "cxr/common.hpp"
#include "cxr/core/grid.hpp"
#include "doctest.h"

using namespace cxr;

namespace {

// Direct (non-separable) reference: 4-tap interpolation in doubles under
// the same pixel-center alignment.
Grid<float> oracle_bilinear(const Grid<float>& src, int64_t oh, int64_t ow) {
  Grid<float> dst(oh, ow);
  for (int64_t r = 0; r < oh; ++r) {
    for (int64_t c = 0; c < ow; ++c) {
      double sy = (double(r) + 0.5) * double(src.h) / double(oh) - 0.5;
      double sx = (double(c) + 0.5) * double(src.w) / double(ow) - 0.5;
      sy = std::clamp(sy, 0.0, double(src.h - 1));
      sx = std::clamp(sx, 0.0, double(src.w - 1));
      const int64_t y0 = int64_t(std::floor(sy)), x0 = int64_t(std::floor(sx));
      const int64_t y1 = std::min(y0 + 1, src.h - 1), x1 = std::min(x0 + 1, src.w - 1);
      const double fy = sy - double(y0), fx = sx - double(x0);
      const double v = (1 - fy) * ((1 - fx) * src(y0, x0) + fx * src(y0, x1)) +
                       fy * ((1 - fx) * src(y1, x0) + fx * src(y1, x1));
      dst(r, c) = float(v);
    }
  }
  return dst;
}

Grid<float> random_image(Rng& rng, int64_t h, int64_t w) {
  Grid<float> g(h, w);
  for (auto& v : g.data) v = rng.uniform_f(0.0f, 1.0f);
  return g;
}

}  // namespace

TEST_CASE("bilinear resize matches the direct 4-tap oracle") {
  Rng rng(201);
  struct Case {
    int64_t ih, iw, oh, ow;
  };
  for (const auto& [ih, iw, oh, ow] : {Case{16, 13, 7, 9}, Case{8, 8, 224 / 8, 224 / 8},
                                       Case{64, 64, 7, 7}, Case{5, 31, 11, 3}}) {
    const auto src = random_image(rng, ih, iw);
    const auto got = resize_bilinear(src, oh, ow);
    const auto want = oracle_bilinear(src, oh, ow);
    double worst = 0.0;
    for (size_t i = 0; i < got.data.size(); ++i)
      worst = std::max(worst, double(std::fabs(got.data[i] - want.data[i])));
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("bilinear resize preserves constants and identity") {
  Grid<float> flat(17, 23, 0.737f);
  const auto up = resize_bilinear(flat, 40, 31);
  for (float v : up.data) CHECK(v == 0.737f);

  Rng rng(203);
  const auto src = random_image(rng, 12, 12);
  const auto same = resize_bilinear(src, 12, 12);
  CHECK(same.data == src.data);
}

TEST_CASE("nearest resize keeps labels and block structure") {
  // Left half foreground: survives any resampling along the same convention.
  MaskGrid half(8, 8, 0);
  for (int64_t r = 0; r < 8; ++r)
    for (int64_t c = 0; c < 4; ++c) half(r, c) = 1;
  const auto down = resize_nearest(half, 4, 4);
  for (int64_t r = 0; r < 4; ++r) {
    CHECK(down(r, 0) == 1);
    CHECK(down(r, 1) == 1);
    CHECK(down(r, 2) == 0);
    CHECK(down(r, 3) == 0);
  }
  const auto up = resize_nearest(half, 16, 16);
  for (int64_t r = 0; r < 16; ++r) {
    CHECK(up(r, 0) == 1);
    CHECK(up(r, 7) == 1);
    CHECK(up(r, 8) == 0);
    CHECK(up(r, 15) == 0);
  }
  for (uint8_t v : up.data) CHECK((v == 0 || v == 1));
}

TEST_CASE("affine warp: identity is exact, integer shifts copy pixels") {
  Rng rng(207);
  const auto src = random_image(rng, 10, 14);

  const auto same = warp_affine_bilinear(src, Affine::identity());
  CHECK(same.data == src.data);

  // Shift the content right by 3 and down by 2: out(r,c) = src(r-2, c-3).
  const auto shifted = warp_affine_bilinear(src, Affine::translation(-3.0, -2.0));
  for (int64_t r = 0; r < src.h; ++r)
    for (int64_t c = 0; c < src.w; ++c) {
      const float want = (r >= 2 && c >= 3) ? src(r - 2, c - 3) : 0.0f;
      CHECK(shifted(r, c) == want);
    }
}

TEST_CASE("affine composition and inversion") {
  const double cx = 6.5, cy = 4.5;
  const Affine fwd = Affine::rotation_about(cx, cy, 10.0 * std::numbers::pi / 180.0)
                         .compose(Affine::scale_about(cx, cy, 1.07))
                         .compose(Affine::translation(1.25, -0.75));
  const Affine round_trip = fwd.compose(fwd.invert());
  const Affine id = Affine::identity();
  for (int i = 0; i < 6; ++i) CHECK(round_trip.m[i] == doctest::Approx(id.m[i]).epsilon(1e-12));

  // Rotation about the centre keeps the centre fixed.
  double sx, sy;
  fwd.apply(cx, cy, sx, sy);
  Affine rot = Affine::rotation_about(cx, cy, 0.3);
  rot.apply(cx, cy, sx, sy);
  CHECK(sx == doctest::Approx(cx).epsilon(1e-12));
  CHECK(sy == doctest::Approx(cy).epsilon(1e-12));
}

TEST_CASE("nearest warp keeps masks binary under rotation") {
  MaskGrid m(21, 21, 0);
  for (int64_t r = 6; r <= 14; ++r)
    for (int64_t c = 8; c <= 12; ++c) m(r, c) = 1;
  const Affine rot = Affine::rotation_about(10.0, 10.0, 0.25);
  const auto warped = warp_affine_nearest(m, rot);
  int64_t fg = 0;
  for (uint8_t v : warped.data) {
    CHECK((v == 0 || v == 1));
    fg += v;
  }
  CHECK(fg > 0);
}
