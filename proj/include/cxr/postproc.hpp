#pragma once

#include <cstdint>

#include "cxr/core/grid.hpp"

namespace cxr::postproc {

struct PostprocParams {
  double threshold = 0.25;
  double min_area_fraction = 0.005;  // of the frame area, per class
  bool hole_fill = true;

  void validate() const;
};

// score >= threshold is foreground (inclusive boundary).
MaskGrid binarize(const Grid<float>& scores, double threshold);

// Delete every 8-connected foreground component smaller than min_area pixels.
MaskGrid remove_small_objects(const MaskGrid& mask, int64_t min_area);

// Background regions not 4-connected to the image border become foreground.
MaskGrid fill_holes(const MaskGrid& mask);

// binarize -> remove_small_objects -> fill_holes; idempotent on its output.
MaskGrid apply(const Grid<float>& scores, const PostprocParams& p);

// Number of connected foreground components (8-connectivity matches the
// object convention used by remove_small_objects).
int64_t count_components(const MaskGrid& mask);

}  // namespace cxr::postproc
