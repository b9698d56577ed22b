#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cxr/core/grid.hpp"
#include "cxr/core/tensor.hpp"

namespace cxr::dataset {

// Channel/class order used everywhere downstream.
inline constexpr std::array<const char*, 3> kStructures = {"lungs", "heart", "clavicles"};

inline constexpr int64_t kNativeSize = 2048;
inline constexpr int64_t kWorkingSize = 224;
inline constexpr double kNativeSpacingMm = 0.175;
inline constexpr int64_t kMaxPixelValue = 4095;  // 12-bit depth
inline constexpr int64_t kCaseCount = 247;

struct Radiograph {
  std::string case_id;
  Grid<uint16_t> pixels;  // kNativeSize square, values in [0, kMaxPixelValue]
  double spacing_mm = kNativeSpacingMm;
};

struct MaskSet {
  std::string case_id;
  int64_t h = 0, w = 0;
  std::map<std::string, MaskGrid> masks;  // keyed by structure name

  const MaskGrid& at(const std::string& structure) const;
};

struct FoldSplit {
  std::vector<std::string> fold1;
  std::vector<std::string> fold2;
};

// Normalized working-resolution input. One plane is stored; the model's
// three input channels are identical copies of it.
struct ModelInput {
  std::string case_id;
  Grid<float> grid;  // kWorkingSize square, zero mean / unit variance
  double norm_mean = 0.0;
  double norm_std = 1.0;

  Tensor to_chw() const;  // (3, h, w), three identical planes
};

struct AugmentParams {
  double scale = 0.10;       // +/- fraction around 1
  double translate = 0.10;   // +/- fraction of the side length
  double rotate_deg = 10.0;  // +/- degrees
  uint64_t seed = 0;

  void validate() const;
};

// The 247 benchmark case ids: JPCLN001..154 (nodule) and JPCNN001..093.
std::vector<std::string> all_case_ids();

// Headerless big-endian 16-bit words, row-major; values must fit 12 bits.
// invert flips v -> 4095 - v (raw files store inverted gray levels).
Radiograph parse_jsrt_image(std::span<const uint8_t> raw, bool invert,
                            const std::string& case_id = "");
std::vector<uint8_t> serialize_jsrt_image(const Radiograph& r);
Radiograph load_jsrt_file(const std::filesystem::path& path, bool invert);

// One 8-bit raster per structure at <dir>/<structure>/<case_id>.pgm,
// foreground > maxval/2, resampled (nearest) to the target resolution.
MaskSet load_masks(const std::string& case_id, const std::filesystem::path& source_dir,
                   int64_t target_h, int64_t target_w);

// Data-quality review of native-resolution masks (e.g. lung fields should
// form exactly two components). Returns human-readable warnings, not errors.
std::vector<std::string> quality_warnings(const MaskSet& native);

// Manifest lines are `case_id,fold` with fold in {1,2}; membership must
// partition case_ids exactly. Never samples a random split.
FoldSplit make_fold_split(const std::vector<std::string>& case_ids,
                          const std::filesystem::path& manifest);
// The customary benchmark split: odd-numbered cases to fold 1 (124), even
// to fold 2 (123).
void write_official_manifest(const std::filesystem::path& path);

// Bilinear resize to working resolution, then per-image standardization.
ModelInput preprocess(const Radiograph& r);

// Sampled geometric jitter: scale about centre, rotation about centre, then
// translation. Returns the OUTPUT -> SOURCE map ready for warping.
Affine sample_augment_transform(const AugmentParams& p, int64_t h, int64_t w);

// Applies one transform to the image (bilinear) and all masks (nearest).
std::pair<ModelInput, MaskSet> apply_transform(const ModelInput& x, const MaskSet& m,
                                               const Affine& out_to_src);

std::pair<ModelInput, MaskSet> augment(const ModelInput& x, const MaskSet& m,
                                       const AugmentParams& p);

// Target tensor (m.masks.size() must cover kStructures): (3, h, w) in the
// kStructures channel order, values in {0,1}.
Tensor masks_to_chw(const MaskSet& m);

}  // namespace cxr::dataset
