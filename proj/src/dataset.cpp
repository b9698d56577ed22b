#include "cxr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

#include "cxr/core/pnm.hpp"
#include "cxr/postproc.hpp"

namespace cxr::dataset {

namespace fs = std::filesystem;

const MaskGrid& MaskSet::at(const std::string& structure) const {
  const auto it = masks.find(structure);
  require(it != masks.end(), Err::contract, "mask set has no structure '" + structure + "'");
  return it->second;
}

Tensor ModelInput::to_chw() const {
  Tensor t({3, grid.h, grid.w});
  const size_t plane = grid.data.size();
  for (int c = 0; c < 3; ++c)
    std::copy(grid.data.begin(), grid.data.end(), t.data() + size_t(c) * plane);
  return t;
}

void AugmentParams::validate() const {
  require(std::isfinite(scale) && scale >= 0.0 && scale < 1.0, Err::config,
          "scale jitter must lie in [0,1)");
  require(std::isfinite(translate) && translate >= 0.0 && translate < 1.0, Err::config,
          "translation jitter must lie in [0,1)");
  require(std::isfinite(rotate_deg) && rotate_deg >= 0.0 && rotate_deg <= 15.0, Err::config,
          "rotation jitter must lie in [0,15] degrees");
}

std::vector<std::string> all_case_ids() {
  std::vector<std::string> ids;
  ids.reserve(kCaseCount);
  char buf[16];
  for (int i = 1; i <= 154; ++i) {
    std::snprintf(buf, sizeof(buf), "JPCLN%03d", i);
    ids.emplace_back(buf);
  }
  for (int i = 1; i <= 93; ++i) {
    std::snprintf(buf, sizeof(buf), "JPCNN%03d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

Radiograph parse_jsrt_image(std::span<const uint8_t> raw, bool invert,
                            const std::string& case_id) {
  const size_t expected = size_t(kNativeSize) * size_t(kNativeSize) * 2;
  require(raw.size() == expected, Err::malformed_file,
          "raw radiograph must be " + std::to_string(expected) + " bytes, got " +
              std::to_string(raw.size()));
  Radiograph r;
  r.case_id = case_id;
  r.pixels = Grid<uint16_t>(kNativeSize, kNativeSize);
  for (size_t i = 0; i < r.pixels.data.size(); ++i) {
    const uint16_t v = uint16_t((uint16_t(raw[2 * i]) << 8) | raw[2 * i + 1]);
    require(v <= kMaxPixelValue, Err::depth_violation,
            "pixel value " + std::to_string(v) + " exceeds 12-bit depth at index " +
                std::to_string(i));
    r.pixels.data[i] = invert ? uint16_t(kMaxPixelValue - v) : v;
  }
  return r;
}

std::vector<uint8_t> serialize_jsrt_image(const Radiograph& r) {
  require(r.pixels.h == kNativeSize && r.pixels.w == kNativeSize, Err::contract,
          "radiograph is not native resolution");
  std::vector<uint8_t> out(r.pixels.data.size() * 2);
  for (size_t i = 0; i < r.pixels.data.size(); ++i) {
    const uint16_t v = r.pixels.data[i];
    require(v <= kMaxPixelValue, Err::depth_violation, "pixel exceeds 12-bit depth");
    out[2 * i] = uint8_t(v >> 8);
    out[2 * i + 1] = uint8_t(v & 0xff);
  }
  return out;
}

Radiograph load_jsrt_file(const fs::path& path, bool invert) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  require(in.good(), Err::io, "cannot open radiograph " + path.string());
  const auto size = static_cast<size_t>(in.tellg());
  in.seekg(0);
  std::vector<uint8_t> raw(size);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(size));
  require(in.gcount() == static_cast<std::streamsize>(size), Err::io,
          "cannot read " + path.string());
  return parse_jsrt_image(raw, invert, path.stem().string());
}

MaskSet load_masks(const std::string& case_id, const fs::path& source_dir, int64_t target_h,
                   int64_t target_w) {
  require(target_h > 0 && target_w > 0, Err::contract, "target resolution must be positive");
  MaskSet out;
  out.case_id = case_id;
  out.h = target_h;
  out.w = target_w;
  for (const char* structure : kStructures) {
    const fs::path p = source_dir / structure / (case_id + ".pgm");
    require(fs::exists(p), Err::incomplete_ground_truth,
            case_id + ": missing " + std::string(structure) + " mask at " + p.string());
    const auto img = pnm::read_pgm(p);
    // A mask raster carries at most two distinct levels; anything else was
    // blended or mislabeled.
    std::set<uint8_t> levels(img.pixels.data.begin(), img.pixels.data.end());
    require(levels.size() <= 2, Err::format,
            p.string() + ": raster has " + std::to_string(levels.size()) +
                " distinct levels, expected a binary mask");
    const uint8_t cut = uint8_t(img.maxval / 2);
    MaskGrid bin(img.pixels.h, img.pixels.w, 0);
    for (size_t i = 0; i < bin.data.size(); ++i) bin.data[i] = img.pixels.data[i] > cut ? 1 : 0;
    out.masks[structure] = resize_nearest(bin, target_h, target_w);
  }
  return out;
}

std::vector<std::string> quality_warnings(const MaskSet& native) {
  std::vector<std::string> warnings;
  const auto it = native.masks.find("lungs");
  if (it != native.masks.end()) {
    const int64_t n = postproc::count_components(it->second);
    if (n != 2)
      warnings.push_back(native.case_id + ": lungs mask has " + std::to_string(n) +
                         " connected components, expected 2");
  }
  for (const auto& [structure, mask] : native.masks) {
    int64_t fg = 0;
    for (uint8_t v : mask.data) fg += v != 0;
    if (fg == 0) warnings.push_back(native.case_id + ": " + structure + " mask is empty");
  }
  return warnings;
}

FoldSplit make_fold_split(const std::vector<std::string>& case_ids, const fs::path& manifest) {
  std::ifstream in(manifest);
  require(in.good(), Err::io, "cannot open fold manifest " + manifest.string());

  std::map<std::string, int> assignment;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    require(comma != std::string::npos, Err::split_integrity,
            manifest.string() + ":" + std::to_string(lineno) + ": expected 'case_id,fold'");
    const std::string id = line.substr(0, comma);
    const std::string fold = line.substr(comma + 1);
    require(fold == "1" || fold == "2", Err::split_integrity,
            manifest.string() + ":" + std::to_string(lineno) + ": fold must be 1 or 2");
    require(assignment.emplace(id, fold[0] - '0').second, Err::split_integrity,
            manifest.string() + ": duplicate case id " + id);
  }

  const std::set<std::string> wanted(case_ids.begin(), case_ids.end());
  require(wanted.size() == case_ids.size(), Err::split_integrity, "duplicate ids in case list");
  for (const auto& [id, fold] : assignment)
    require(wanted.count(id) != 0, Err::split_integrity,
            manifest.string() + ": unknown case id " + id);
  FoldSplit split;
  for (const std::string& id : case_ids) {
    const auto it = assignment.find(id);
    require(it != assignment.end(), Err::split_integrity,
            manifest.string() + ": case " + id + " missing from manifest");
    (it->second == 1 ? split.fold1 : split.fold2).push_back(id);
  }
  if (case_ids.size() == size_t(kCaseCount))
    require(split.fold1.size() == 124 && split.fold2.size() == 123, Err::split_integrity,
            "benchmark split must be 124 + 123, manifest gives " +
                std::to_string(split.fold1.size()) + " + " + std::to_string(split.fold2.size()));
  return split;
}

void write_official_manifest(const fs::path& path) {
  std::ofstream out(path);
  require(out.good(), Err::io, "cannot write manifest " + path.string());
  out << "# JSRT benchmark fold membership: odd-numbered cases in fold 1,\n"
         "# even-numbered in fold 2.\n";
  for (const std::string& id : all_case_ids()) {
    const int num = std::stoi(id.substr(5));
    out << id << ',' << (num % 2 == 1 ? 1 : 2) << '\n';
  }
  require(out.good(), Err::io, "short write to " + path.string());
}

ModelInput preprocess(const Radiograph& r) {
  require(r.pixels.h == kNativeSize && r.pixels.w == kNativeSize, Err::contract,
          "radiograph is not native resolution");
  Grid<float> img(r.pixels.h, r.pixels.w);
  for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = float(r.pixels.data[i]);
  Grid<float> small = resize_bilinear(img, kWorkingSize, kWorkingSize);

  double sum = 0.0;
  for (float v : small.data) sum += v;
  const double mean = sum / double(small.data.size());
  double var = 0.0;
  for (float v : small.data) var += (v - mean) * (v - mean);
  var /= double(small.data.size());
  require(var > 0.0, Err::degenerate_input,
          r.case_id + ": constant image cannot be standardized");
  const double inv_std = 1.0 / std::sqrt(var);
  for (auto& v : small.data) v = float((v - mean) * inv_std);

  return {r.case_id, std::move(small), mean, std::sqrt(var)};
}

Affine sample_augment_transform(const AugmentParams& p, int64_t h, int64_t w) {
  p.validate();
  Rng rng(p.seed);
  const double s = 1.0 + rng.uniform(-p.scale, p.scale);
  const double angle = rng.uniform(-p.rotate_deg, p.rotate_deg) * std::numbers::pi / 180.0;
  const double tx = rng.uniform(-p.translate, p.translate) * double(w);
  const double ty = rng.uniform(-p.translate, p.translate) * double(h);
  const double cx = double(w - 1) / 2.0, cy = double(h - 1) / 2.0;
  // Content transform: scale about centre, rotate about centre, shift.
  const Affine fwd = Affine::translation(tx, ty)
                         .compose(Affine::rotation_about(cx, cy, angle))
                         .compose(Affine::scale_about(cx, cy, s));
  return fwd.invert();
}

std::pair<ModelInput, MaskSet> apply_transform(const ModelInput& x, const MaskSet& m,
                                               const Affine& out_to_src) {
  require(x.grid.h == m.h && x.grid.w == m.w, Err::contract,
          "image and masks disagree on resolution");
  ModelInput xo{x.case_id, warp_affine_bilinear(x.grid, out_to_src), x.norm_mean, x.norm_std};
  MaskSet mo;
  mo.case_id = m.case_id;
  mo.h = m.h;
  mo.w = m.w;
  for (const auto& [structure, mask] : m.masks)
    mo.masks[structure] = warp_affine_nearest(mask, out_to_src);
  return {std::move(xo), std::move(mo)};
}

std::pair<ModelInput, MaskSet> augment(const ModelInput& x, const MaskSet& m,
                                       const AugmentParams& p) {
  return apply_transform(x, m, sample_augment_transform(p, x.grid.h, x.grid.w));
}

Tensor masks_to_chw(const MaskSet& m) {
  Tensor t({int64_t(kStructures.size()), m.h, m.w});
  const size_t plane = size_t(m.h * m.w);
  for (size_t c = 0; c < kStructures.size(); ++c) {
    const MaskGrid& mask = m.at(kStructures[c]);
    require(mask.h == m.h && mask.w == m.w, Err::contract, "mask resolution mismatch");
    for (size_t i = 0; i < plane; ++i) t.data()[c * plane + i] = mask.data[i] ? 1.0f : 0.0f;
  }
  return t;
}

}  // namespace cxr::dataset
