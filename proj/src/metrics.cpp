#include "cxr/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace cxr::metrics {

namespace {

int64_t count_fg(const MaskGrid& m) {
  int64_t n = 0;
  for (uint8_t v : m.data) n += v != 0;
  return n;
}

void overlap_counts(const MaskGrid& a, const MaskGrid& b, int64_t& na, int64_t& nb,
                    int64_t& inter) {
  require(a.same_shape(b), Err::contract, "mask shape mismatch");
  require(a.numel() > 0, Err::degenerate_input, "empty masks");
  na = nb = inter = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const bool fa = a.data[i] != 0, fb = b.data[i] != 0;
    na += fa;
    nb += fb;
    inter += fa && fb;
  }
  require(na + nb > 0, Err::undefined_measure, "overlap measure undefined: both masks empty");
}

// Directed mean closest-point distance in pixels, exact integer geometry
// under the square root.
double directed_mean(const Contour& from, const Contour& to) {
  double acc = 0.0;
  for (const auto& [ar, ac] : from.points) {
    int64_t best = std::numeric_limits<int64_t>::max();
    for (const auto& [br, bc] : to.points) {
      const int64_t dr = int64_t(ar) - br, dc = int64_t(ac) - bc;
      best = std::min(best, dr * dr + dc * dc);
    }
    acc += std::sqrt(double(best));
  }
  return acc / double(from.points.size());
}

}  // namespace

double dice_coeff(const MaskGrid& a, const MaskGrid& b) {
  int64_t na, nb, inter;
  overlap_counts(a, b, na, nb, inter);
  return 2.0 * double(inter) / double(na + nb);
}

double jaccard_index(const MaskGrid& a, const MaskGrid& b) {
  int64_t na, nb, inter;
  overlap_counts(a, b, na, nb, inter);
  return double(inter) / double(na + nb - inter);
}

Contour extract_contour(const MaskGrid& mask) {
  require(count_fg(mask) > 0, Err::empty_structure, "cannot trace contour of an empty mask");
  Contour out;
  for (int64_t r = 0; r < mask.h; ++r) {
    for (int64_t c = 0; c < mask.w; ++c) {
      if (!mask(r, c)) continue;
      const bool boundary = r == 0 || r == mask.h - 1 || c == 0 || c == mask.w - 1 ||
                            !mask(r - 1, c) || !mask(r + 1, c) || !mask(r, c - 1) ||
                            !mask(r, c + 1);
      if (boundary) out.points.emplace_back(int32_t(r), int32_t(c));
    }
  }
  return out;
}

double macd(const MaskGrid& a, const MaskGrid& b, double mm_per_pixel) {
  require(a.same_shape(b), Err::contract, "mask shape mismatch");
  require(std::isfinite(mm_per_pixel) && mm_per_pixel > 0.0, Err::contract,
          "pixel pitch must be positive");
  require(count_fg(a) > 0 && count_fg(b) > 0, Err::undefined_measure,
          "contour distance undefined for an empty mask");
  const Contour ca = extract_contour(a);
  const Contour cb = extract_contour(b);
  return mm_per_pixel * 0.5 * (directed_mean(ca, cb) + directed_mean(cb, ca));
}

double mm_scale(double native_spacing_mm, int64_t native_size, int64_t working_size) {
  require(native_size > 0 && working_size > 0, Err::contract, "sizes must be positive");
  require(std::isfinite(native_spacing_mm) && native_spacing_mm > 0.0, Err::contract,
          "spacing must be positive");
  if (native_size == working_size) return native_spacing_mm;  // no resampling, no rescale
  return native_spacing_mm * double(native_size) / double(working_size);
}

std::string csv_header() { return "case_id,structure,dice,jaccard,macd_mm"; }

std::string csv_row(const MetricsRecord& rec) {
  char buf[160];
  if (rec.macd_mm)
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f", rec.case_id.c_str(),
                  rec.structure.c_str(), rec.dice, rec.jaccard, *rec.macd_mm);
  else
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,", rec.case_id.c_str(),
                  rec.structure.c_str(), rec.dice, rec.jaccard);
  return buf;
}

namespace {

double parse_number(const std::string& field, int64_t lineno) {
  size_t idx = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &idx);
  } catch (const std::exception&) {
    idx = 0;
  }
  require(idx == field.size() && std::isfinite(v), Err::malformed_file,
          "records csv line " + std::to_string(lineno) + ": bad number '" + field + "'");
  return v;
}

}  // namespace

std::vector<MetricsRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  require(bool(std::getline(in, line)), Err::malformed_file, "records csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == csv_header(), Err::malformed_file, "records csv: unexpected header '" + line + "'");

  std::vector<MetricsRecord> out;
  int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string, 5> f;
    size_t start = 0, field = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field < f.size()) f[field] = line.substr(start, i - start);
        ++field;
        start = i + 1;
      }
    }
    require(field == f.size(), Err::malformed_file,
            "records csv line " + std::to_string(lineno) + ": want 5 fields, got " +
                std::to_string(field));
    MetricsRecord r;
    r.case_id = f[0];
    r.structure = f[1];
    require(!r.case_id.empty() && !r.structure.empty(), Err::malformed_file,
            "records csv line " + std::to_string(lineno) + ": empty case id or structure");
    r.dice = parse_number(f[2], lineno);
    r.jaccard = parse_number(f[3], lineno);
    if (!f[4].empty()) r.macd_mm = parse_number(f[4], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace cxr::metrics
