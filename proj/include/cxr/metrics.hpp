#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxr/core/grid.hpp"

namespace cxr::metrics {

// Boundary pixels of a mask, (row, col), in row-major scan order. Covers
// every connected component; multi-part structures pool into one point set.
struct Contour {
  std::vector<std::pair<int32_t, int32_t>> points;

  bool empty() const { return points.empty(); }
  size_t size() const { return points.size(); }
};

struct MetricsRecord {
  std::string case_id;
  std::string structure;
  double dice = 0.0;
  double jaccard = 0.0;
  std::optional<double> macd_mm;  // empty when either contour is missing
};

// Overlap measures on binary masks (foreground = nonzero). Both-empty pairs
// have no defined value and throw undefined_measure.
double dice_coeff(const MaskGrid& a, const MaskGrid& b);
double jaccard_index(const MaskGrid& a, const MaskGrid& b);

// Foreground pixels with a 4-connected background neighbour; pixels on the
// image border count as boundary. Throws empty_structure on an empty mask.
Contour extract_contour(const MaskGrid& mask);

// Symmetric mean absolute contour distance in millimetres: the average of
// the two directed mean closest-point distances, scaled by the pixel pitch.
// Exact all-pairs Euclidean minimum over pooled contour point sets.
double macd(const MaskGrid& a, const MaskGrid& b, double mm_per_pixel);

// Pixel pitch after resampling a native_size image to working_size.
double mm_scale(double native_spacing_mm, int64_t native_size, int64_t working_size);

std::string csv_header();
std::string csv_row(const MetricsRecord& rec);

// Inverse of the two writers: parses a whole records file (header line
// required, an empty distance field stays unset). Malformed rows report
// their line number.
std::vector<MetricsRecord> parse_csv(const std::string& text);

}  // namespace cxr::metrics
