#include "cxr/postproc.hpp"

#include <cmath>
#include <vector>

namespace cxr::postproc {

void PostprocParams::validate() const {
  require(std::isfinite(threshold) && threshold > 0.0 && threshold < 1.0, Err::config,
          "threshold must lie in (0,1)");
  require(std::isfinite(min_area_fraction) && min_area_fraction >= 0.0 &&
              min_area_fraction < 0.5,
          Err::config, "min_area_fraction must lie in [0, 0.5)");
}

MaskGrid binarize(const Grid<float>& scores, double threshold) {
  MaskGrid out(scores.h, scores.w, 0);
  for (size_t i = 0; i < scores.data.size(); ++i)
    out.data[i] = double(scores.data[i]) >= threshold ? 1 : 0;
  return out;
}

namespace {

// Iterative flood fill writing `label` into `labels` over pixels of `mask`
// equal to `match`, starting at (r0,c0); returns the component size.
// Connectivity: 8 for foreground objects, 4 for background regions.
int64_t flood(const MaskGrid& mask, uint8_t match, std::vector<int32_t>& labels, int32_t label,
              int64_t r0, int64_t c0, bool eight_conn, std::vector<int64_t>& stack) {
  const int64_t w = mask.w;
  stack.clear();
  stack.push_back(r0 * w + c0);
  labels[static_cast<size_t>(r0 * w + c0)] = label;
  int64_t count = 0;
  while (!stack.empty()) {
    const int64_t idx = stack.back();
    stack.pop_back();
    ++count;
    const int64_t r = idx / w, c = idx % w;
    auto visit = [&](int64_t rr, int64_t cc) {
      if (!mask.in_bounds(rr, cc)) return;
      const size_t j = static_cast<size_t>(rr * w + cc);
      if (labels[j] >= 0 || mask.data[j] != match) return;
      labels[j] = label;
      stack.push_back(static_cast<int64_t>(j));
    };
    visit(r - 1, c);
    visit(r + 1, c);
    visit(r, c - 1);
    visit(r, c + 1);
    if (eight_conn) {
      visit(r - 1, c - 1);
      visit(r - 1, c + 1);
      visit(r + 1, c - 1);
      visit(r + 1, c + 1);
    }
  }
  return count;
}

}  // namespace

MaskGrid remove_small_objects(const MaskGrid& mask, int64_t min_area) {
  require(min_area >= 0, Err::contract, "min_area must be non-negative");
  if (min_area <= 1) return mask;  // nothing can be smaller than one pixel

  std::vector<int32_t> labels(mask.data.size(), -1);
  std::vector<int64_t> sizes;  // indexed by label
  std::vector<int64_t> stack;
  int32_t next = 0;
  for (int64_t r = 0; r < mask.h; ++r)
    for (int64_t c = 0; c < mask.w; ++c) {
      const size_t i = static_cast<size_t>(r * mask.w + c);
      if (mask.data[i] == 0 || labels[i] >= 0) continue;
      sizes.push_back(flood(mask, 1, labels, next, r, c, /*eight_conn=*/true, stack));
      ++next;
    }

  MaskGrid out(mask.h, mask.w, 0);
  for (size_t i = 0; i < mask.data.size(); ++i)
    if (mask.data[i] && sizes[static_cast<size_t>(labels[i])] >= min_area) out.data[i] = 1;
  return out;
}

MaskGrid fill_holes(const MaskGrid& mask) {
  std::vector<int32_t> labels(mask.data.size(), -1);
  std::vector<int64_t> stack;
  // Label 0 = background reachable from the border with 4-connectivity.
  for (int64_t r = 0; r < mask.h; ++r)
    for (int64_t c = 0; c < mask.w; ++c) {
      if (r != 0 && r != mask.h - 1 && c != 0 && c != mask.w - 1) continue;
      const size_t i = static_cast<size_t>(r * mask.w + c);
      if (mask.data[i] == 0 && labels[i] < 0)
        flood(mask, 0, labels, 0, r, c, /*eight_conn=*/false, stack);
    }

  MaskGrid out = mask;
  for (size_t i = 0; i < mask.data.size(); ++i)
    if (mask.data[i] == 0 && labels[i] < 0) out.data[i] = 1;  // enclosed background
  return out;
}

int64_t count_components(const MaskGrid& mask) {
  std::vector<int32_t> labels(mask.data.size(), -1);
  std::vector<int64_t> stack;
  int32_t next = 0;
  for (int64_t r = 0; r < mask.h; ++r)
    for (int64_t c = 0; c < mask.w; ++c) {
      const size_t i = static_cast<size_t>(r * mask.w + c);
      if (mask.data[i] == 0 || labels[i] >= 0) continue;
      flood(mask, 1, labels, next, r, c, /*eight_conn=*/true, stack);
      ++next;
    }
  return next;
}

MaskGrid apply(const Grid<float>& scores, const PostprocParams& p) {
  p.validate();
  const int64_t min_area =
      static_cast<int64_t>(std::floor(p.min_area_fraction * double(scores.h * scores.w)));
  MaskGrid m = binarize(scores, p.threshold);
  m = remove_small_objects(m, min_area);
  if (p.hole_fill) m = fill_holes(m);
  return m;
}

}  // namespace cxr::postproc
