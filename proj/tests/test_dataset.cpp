#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>

#include "cxr/common.hpp"
#include "cxr/core/pnm.hpp"
#include "cxr/dataset.hpp"
#include "doctest.h"

using namespace cxr;
using namespace cxr::dataset;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("cxr_ds_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<uint8_t> be_words(const std::vector<uint16_t>& vals) {
  std::vector<uint8_t> out(vals.size() * 2);
  for (size_t i = 0; i < vals.size(); ++i) {
    out[2 * i] = uint8_t(vals[i] >> 8);
    out[2 * i + 1] = uint8_t(vals[i] & 0xff);
  }
  return out;
}

void write_mask_raster(const fs::path& dir, const char* structure, const std::string& case_id,
                       const MaskGrid& m, uint8_t fg_value = 255) {
  fs::create_directories(dir / structure);
  MaskGrid scaled(m.h, m.w, 0);
  for (size_t i = 0; i < m.data.size(); ++i) scaled.data[i] = m.data[i] ? fg_value : 0;
  pnm::write_pgm(dir / structure / (case_id + ".pgm"), scaled);
}

Radiograph synthetic_radiograph(Rng& rng) {
  Radiograph r;
  r.case_id = "SYNTH";
  r.pixels = Grid<uint16_t>(kNativeSize, kNativeSize);
  for (auto& v : r.pixels.data) v = uint16_t(rng.uniform_int(0, kMaxPixelValue));
  return r;
}

}  // namespace

TEST_CASE("radiograph parser decodes big-endian 12-bit words") {
  const size_t n = size_t(kNativeSize) * size_t(kNativeSize);

  std::vector<uint8_t> zeros(n * 2, 0);
  const auto r0 = parse_jsrt_image(zeros, false);
  CHECK(r0.pixels(0, 0) == 0);
  CHECK(r0.pixels(2047, 2047) == 0);
  CHECK(r0.spacing_mm == 0.175);

  // All-white input inverted comes back to zero.
  std::vector<uint16_t> white(n, 0x0FFF);
  const auto r1 = parse_jsrt_image(be_words(white), true);
  CHECK(r1.pixels(100, 200) == 0);

  // Big-endian byte order: word 0x0ABC decodes to 2748.
  std::vector<uint16_t> vals(n, 0);
  vals[0] = 0x0ABC;
  vals[1] = 0x0001;
  const auto r2 = parse_jsrt_image(be_words(vals), false);
  CHECK(r2.pixels(0, 0) == 2748);
  CHECK(r2.pixels(0, 1) == 1);

  std::vector<uint8_t> short_buf(100);
  CHECK_THROWS_AS((void)parse_jsrt_image(short_buf, false), Error);

  vals[5] = 0x1000;  // 4096: one past the 12-bit ceiling
  try {
    (void)parse_jsrt_image(be_words(vals), false);
    FAIL("expected depth violation");
  } catch (const Error& e) {
    CHECK(e.code() == Err::depth_violation);
  }
}

TEST_CASE("radiograph serialization round-trips bytes and pixels") {
  Rng rng(501);
  const auto r = synthetic_radiograph(rng);
  const auto bytes = serialize_jsrt_image(r);
  const auto back = parse_jsrt_image(bytes, false, r.case_id);
  CHECK(back.pixels.data == r.pixels.data);
  CHECK(serialize_jsrt_image(back) == bytes);
}

TEST_CASE("case id roster covers both series") {
  const auto ids = all_case_ids();
  REQUIRE(ids.size() == 247);
  CHECK(ids.front() == "JPCLN001");
  CHECK(ids[153] == "JPCLN154");
  CHECK(ids[154] == "JPCNN001");
  CHECK(ids.back() == "JPCNN093");
  CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 247);
}

TEST_CASE("preprocess standardizes after downsampling") {
  Rng rng(503);
  const auto r = synthetic_radiograph(rng);
  const auto x = preprocess(r);
  CHECK(x.grid.h == kWorkingSize);
  CHECK(x.grid.w == kWorkingSize);

  double sum = 0.0, sq = 0.0;
  for (float v : x.grid.data) {
    sum += v;
    sq += double(v) * v;
  }
  const double mean = sum / double(x.grid.numel());
  const double var = sq / double(x.grid.numel()) - mean * mean;
  CHECK(std::fabs(mean) < 1e-4);
  CHECK(std::fabs(std::sqrt(var) - 1.0) < 1e-4);

  // The three model channels are the same plane.
  const auto chw = x.to_chw();
  REQUIRE(chw.shape() == std::vector<int64_t>{3, kWorkingSize, kWorkingSize});
  const int64_t plane = kWorkingSize * kWorkingSize;
  for (int64_t i = 0; i < plane; ++i) {
    CHECK(chw[i] == chw[plane + i]);
    CHECK(chw[i] == chw[2 * plane + i]);
  }

  Radiograph flat;
  flat.case_id = "FLAT";
  flat.pixels = Grid<uint16_t>(kNativeSize, kNativeSize);
  for (auto& v : flat.pixels.data) v = 1234;
  CHECK_THROWS_AS((void)preprocess(flat), Error);
}

TEST_CASE("preprocess resampling matches an independent reference") {
  // Checkerboard of {0, 4095}; compare de-normalized output against a
  // direct 4-tap double-precision resampler.
  Radiograph r;
  r.case_id = "CHECKER";
  r.pixels = Grid<uint16_t>(kNativeSize, kNativeSize);
  for (int64_t row = 0; row < kNativeSize; ++row)
    for (int64_t col = 0; col < kNativeSize; ++col)
      r.pixels(row, col) = ((row + col) % 2) ? kMaxPixelValue : 0;

  const auto x = preprocess(r);
  double worst = 0.0;
  for (int64_t row = 0; row < kWorkingSize; ++row) {
    for (int64_t col = 0; col < kWorkingSize; ++col) {
      double sy = (double(row) + 0.5) * double(kNativeSize) / double(kWorkingSize) - 0.5;
      double sx = (double(col) + 0.5) * double(kNativeSize) / double(kWorkingSize) - 0.5;
      sy = std::clamp(sy, 0.0, double(kNativeSize - 1));
      sx = std::clamp(sx, 0.0, double(kNativeSize - 1));
      const int64_t y0 = int64_t(std::floor(sy)), x0 = int64_t(std::floor(sx));
      const int64_t y1 = std::min(y0 + 1, kNativeSize - 1), x1 = std::min(x0 + 1, kNativeSize - 1);
      const double fy = sy - double(y0), fx = sx - double(x0);
      const double want = (1 - fy) * ((1 - fx) * r.pixels(y0, x0) + fx * r.pixels(y0, x1)) +
                          fy * ((1 - fx) * r.pixels(y1, x0) + fx * r.pixels(y1, x1));
      const double got = double(x.grid(row, col)) * x.norm_std + x.norm_mean;
      worst = std::max(worst, std::fabs(got - want));
    }
  }
  CHECK(worst < 0.05);  // float pipeline against double oracle, 12-bit scale
}

TEST_CASE("mask loading thresholds, resamples, and validates") {
  TempDir tmp;
  const std::string id = "JPCLN001";

  // Half-plane at 448x448: left half foreground.
  MaskGrid half(448, 448, 0);
  for (int64_t r = 0; r < 448; ++r)
    for (int64_t c = 0; c < 224; ++c) half(r, c) = 1;
  write_mask_raster(tmp.path, "lungs", id, half);

  MaskGrid zeros1024(1024, 1024, 0);
  write_mask_raster(tmp.path, "heart", id, zeros1024);

  MaskGrid ones(336, 336, 1);
  write_mask_raster(tmp.path, "clavicles", id, ones, 200);  // foreground level 200 > 127

  const auto ms = load_masks(id, tmp.path, 224, 224);
  CHECK(ms.h == 224);
  CHECK(ms.masks.size() == 3);

  // Half-plane boundary lands within one pixel of the centre column.
  const auto& lungs = ms.at("lungs");
  int64_t boundary = -1;
  for (int64_t c = 0; c < 224; ++c)
    if (lungs(112, c) == 0) {
      boundary = c;
      break;
    }
  CHECK(boundary >= 111);
  CHECK(boundary <= 113);
  for (int64_t c = 0; c < boundary; ++c) CHECK(lungs(112, c) == 1);

  int64_t heart_fg = 0;
  for (uint8_t v : ms.at("heart").data) heart_fg += v;
  CHECK(heart_fg == 0);

  int64_t clav_fg = 0;
  for (uint8_t v : ms.at("clavicles").data) clav_fg += v;
  CHECK(clav_fg == 224 * 224);
}

TEST_CASE("mask loading reports missing and malformed rasters") {
  TempDir tmp;
  const std::string id = "JPCLN002";
  MaskGrid m(64, 64, 0);
  m(30, 30) = 1;
  write_mask_raster(tmp.path, "lungs", id, m);
  write_mask_raster(tmp.path, "heart", id, m);
  try {
    (void)load_masks(id, tmp.path, 224, 224);
    FAIL("expected incomplete ground truth");
  } catch (const Error& e) {
    CHECK(e.code() == Err::incomplete_ground_truth);
  }

  // Three distinct levels: not a mask.
  fs::create_directories(tmp.path / "clavicles");
  MaskGrid tri(64, 64, 0);
  tri.data[0] = 255;
  tri.data[1] = 100;
  pnm::write_pgm(tmp.path / "clavicles" / (id + ".pgm"), tri);
  try {
    (void)load_masks(id, tmp.path, 224, 224);
    FAIL("expected format error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::format);
  }
}

TEST_CASE("data quality review flags unexpected lung topology") {
  MaskSet ms;
  ms.case_id = "Q";
  ms.h = ms.w = 64;
  MaskGrid lungs(64, 64, 0);
  for (int64_t r = 10; r < 30; ++r) {
    for (int64_t c = 5; c < 20; ++c) lungs(r, c) = 1;
    for (int64_t c = 40; c < 55; ++c) lungs(r, c) = 1;
  }
  MaskGrid blob(64, 64, 0);
  for (int64_t r = 35; r < 50; ++r)
    for (int64_t c = 20; c < 44; ++c) blob(r, c) = 1;
  ms.masks["lungs"] = lungs;
  ms.masks["heart"] = blob;
  ms.masks["clavicles"] = blob;
  CHECK(quality_warnings(ms).empty());

  ms.masks["lungs"] = blob;  // one component
  const auto w1 = quality_warnings(ms);
  REQUIRE(w1.size() == 1);
  CHECK(w1[0].find("connected components") != std::string::npos);

  ms.masks["heart"] = MaskGrid(64, 64, 0);  // empty structure
  CHECK(quality_warnings(ms).size() == 2);
}

TEST_CASE("fold split follows the manifest exactly") {
  TempDir tmp;
  const auto manifest = tmp.path / "folds.csv";
  write_official_manifest(manifest);

  const auto ids = all_case_ids();
  const auto split = make_fold_split(ids, manifest);
  CHECK(split.fold1.size() == 124);
  CHECK(split.fold2.size() == 123);

  std::set<std::string> seen(split.fold1.begin(), split.fold1.end());
  for (const auto& id : split.fold2) CHECK(seen.insert(id).second);
  CHECK(seen.size() == 247);

  // Odd-numbered cases sit in fold 1.
  CHECK(std::find(split.fold1.begin(), split.fold1.end(), "JPCLN001") != split.fold1.end());
  CHECK(std::find(split.fold2.begin(), split.fold2.end(), "JPCLN002") != split.fold2.end());
  CHECK(std::find(split.fold1.begin(), split.fold1.end(), "JPCNN093") != split.fold1.end());
}

TEST_CASE("fold split integrity violations are rejected") {
  TempDir tmp;
  const auto ids = all_case_ids();

  const auto dup = tmp.path / "dup.csv";
  {
    std::ofstream out(dup);
    for (const auto& id : ids) out << id << ",1\n";
    out << ids.front() << ",2\n";
  }
  try {
    (void)make_fold_split(ids, dup);
    FAIL("expected split integrity error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::split_integrity);
  }

  const auto partial = tmp.path / "partial.csv";
  {
    std::ofstream out(partial);
    for (size_t i = 0; i + 1 < ids.size(); ++i) out << ids[i] << "," << (i % 2 + 1) << "\n";
  }
  CHECK_THROWS_AS((void)make_fold_split(ids, partial), Error);

  const auto unknown = tmp.path / "unknown.csv";
  {
    std::ofstream out(unknown);
    for (const auto& id : ids) out << id << ",1\n";
    out << "JPCLN999,2\n";
  }
  CHECK_THROWS_AS((void)make_fold_split(ids, unknown), Error);

  // Right sizes but not the official 124+123 balance.
  const auto skew = tmp.path / "skew.csv";
  {
    std::ofstream out(skew);
    for (const auto& id : ids) out << id << ",1\n";
  }
  CHECK_THROWS_AS((void)make_fold_split(ids, skew), Error);
}

TEST_CASE("augmentation: identity params are the identity") {
  Rng rng(509);
  ModelInput x;
  x.case_id = "A";
  x.grid = Grid<float>(64, 64);
  for (auto& v : x.grid.data) v = rng.uniform_f(-2.0f, 2.0f);
  MaskSet m;
  m.case_id = "A";
  m.h = m.w = 64;
  MaskGrid mk(64, 64, 0);
  for (int64_t r = 20; r < 44; ++r)
    for (int64_t c = 10; c < 30; ++c) mk(r, c) = 1;
  m.masks["lungs"] = mk;
  m.masks["heart"] = mk;
  m.masks["clavicles"] = mk;

  AugmentParams ident{0.0, 0.0, 0.0, 1234};
  const auto [xi, mi] = augment(x, m, ident);
  CHECK(xi.grid.data == x.grid.data);
  CHECK(mi.at("lungs").data == mk.data);

  // Same seed, same everything.
  AugmentParams p{0.10, 0.10, 10.0, 42};
  const auto [x1, m1] = augment(x, m, p);
  const auto [x2, m2] = augment(x, m, p);
  CHECK(x1.grid.data == x2.grid.data);
  CHECK(m1.at("heart").data == m2.at("heart").data);

  // Different seed, different image (overwhelmingly).
  p.seed = 43;
  const auto [x3, m3] = augment(x, m, p);
  CHECK(x3.grid.data != x1.grid.data);

  // Masks stay binary under any sampled transform.
  for (const char* s : kStructures)
    for (uint8_t v : m1.at(s).data) CHECK((v == 0 || v == 1));

  AugmentParams bad{0.10, 0.10, 30.0, 7};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("augmentation: integer translation moves pixels exactly") {
  ModelInput x;
  x.case_id = "T";
  x.grid = Grid<float>(32, 32, 0.0f);
  x.grid(16, 10) = 3.5f;
  MaskSet m;
  m.case_id = "T";
  m.h = m.w = 32;
  MaskGrid mk(32, 32, 0);
  mk(16, 10) = 1;
  m.masks["lungs"] = mk;
  m.masks["heart"] = mk;
  m.masks["clavicles"] = mk;

  // Content moves +5 columns: out(r, c) samples src(r, c-5).
  const auto [xt, mt] = apply_transform(x, m, Affine::translation(-5.0, 0.0));
  CHECK(xt.grid(16, 15) == 3.5f);
  CHECK(xt.grid(16, 10) == 0.0f);
  CHECK(mt.at("lungs")(16, 15) == 1);
  int64_t fg = 0;
  for (uint8_t v : mt.at("lungs").data) fg += v;
  CHECK(fg == 1);
}

TEST_CASE("mask tensor stacking follows the structure order") {
  MaskSet m;
  m.case_id = "S";
  m.h = 2;
  m.w = 2;
  MaskGrid a(2, 2, 0), b(2, 2, 0), c(2, 2, 0);
  a(0, 0) = 1;
  b(0, 1) = 1;
  c(1, 1) = 1;
  m.masks["lungs"] = a;
  m.masks["heart"] = b;
  m.masks["clavicles"] = c;
  const auto t = masks_to_chw(m);
  REQUIRE(t.shape() == std::vector<int64_t>{3, 2, 2});
  CHECK(t[0] == 1.0f);   // lungs plane
  CHECK(t[5] == 1.0f);   // heart plane, (0,1)
  CHECK(t[11] == 1.0f);  // clavicles plane, (1,1)
  CHECK(t[1] == 0.0f);
}
