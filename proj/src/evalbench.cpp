#include "cxr/evalbench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_set>

#include "cxr/nn/autograd.hpp"

namespace cxr::evalbench {

namespace {

bool mask_empty(const MaskGrid& m) {
  return std::none_of(m.data.begin(), m.data.end(), [](uint8_t v) { return v != 0; });
}

void emit_warning(const WarnFn& warn, const std::string& msg) {
  if (warn) warn(msg);
}

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_pm(double mean, double spread) { return fmt3(mean) + "±" + fmt3(spread); }

std::string fmt_published(const PublishedScore& s) {
  if (!s.mean) return "-";
  if (!s.spread) return fmt3(*s.mean);
  return fmt_pm(*s.mean, *s.spread);
}

// Mean and population standard deviation. Values are sorted before
// accumulation so the result is bit-identical under input permutation.
std::pair<double, double> mean_pop_std(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / double(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double var = sq / double(values.size());
  return {mean, std::sqrt(std::max(0.0, var))};
}

}  // namespace

const StructureStats& AggregateReport::at(const std::string& structure) const {
  for (const auto& s : structures)
    if (s.structure == structure) return s;
  fail(Err::contract, "report has no structure '" + structure + "'");
}

bool AggregateReport::has(const std::string& structure) const {
  return std::any_of(structures.begin(), structures.end(),
                     [&](const StructureStats& s) { return s.structure == structure; });
}

std::vector<metrics::MetricsRecord> score_case(const dataset::MaskSet& pred,
                                               const dataset::MaskSet& truth,
                                               const std::vector<std::string>& structures,
                                               double mm_per_pixel, const WarnFn& warn) {
  require(pred.h == truth.h && pred.w == truth.w, Err::contract,
          "prediction and ground truth resolutions differ");
  require(mm_per_pixel > 0.0 && std::isfinite(mm_per_pixel), Err::contract,
          "pixel pitch must be positive");
  const std::string& case_id = truth.case_id.empty() ? pred.case_id : truth.case_id;

  std::vector<metrics::MetricsRecord> records;
  records.reserve(structures.size());
  for (const auto& s : structures) {
    const auto git = truth.masks.find(s);
    if (git == truth.masks.end()) {
      emit_warning(warn, "case '" + case_id + "': no ground truth for '" + s + "'; skipped");
      continue;
    }
    const MaskGrid& p = pred.at(s);
    const MaskGrid& g = git->second;
    require(p.same_shape(g), Err::contract, "mask shapes differ for '" + s + "'");

    metrics::MetricsRecord rec;
    rec.case_id = case_id;
    rec.structure = s;
    const bool pe = mask_empty(p), ge = mask_empty(g);
    if (pe && ge) {
      rec.dice = 1.0;
      rec.jaccard = 1.0;  // nothing annotated, nothing predicted
    } else {
      rec.dice = metrics::dice_coeff(p, g);
      rec.jaccard = metrics::jaccard_index(p, g);
      if (!pe && !ge) rec.macd_mm = metrics::macd(p, g, mm_per_pixel);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

dataset::MaskSet predict_masks(arch::SegmentationModel& model,
                               const std::vector<std::string>& class_names,
                               const dataset::ModelInput& input,
                               const postproc::PostprocParams& post) {
  const int64_t h = input.grid.h, w = input.grid.w;
  Tensor x = input.to_chw().reshaped({1, 3, h, w});
  const nn::Var out = model.forward(nn::constant(std::move(x)));
  const Tensor& scores = out->value;
  require(scores.ndim() == 4 && scores.dim(0) == 1 &&
              scores.dim(1) == int64_t(class_names.size()),
          Err::contract, "model emitted an unexpected score layout");

  dataset::MaskSet pred;
  pred.case_id = input.case_id;
  pred.h = scores.dim(2);
  pred.w = scores.dim(3);
  for (size_t c = 0; c < class_names.size(); ++c) {
    Grid<float> plane(pred.h, pred.w);
    const float* src = scores.data() + int64_t(c) * pred.h * pred.w;
    std::copy(src, src + pred.h * pred.w, plane.data.begin());
    pred.masks.emplace(class_names[c], postproc::apply(plane, post));
  }
  return pred;
}

std::vector<metrics::MetricsRecord> evaluate(const trainer::Checkpoint& ckpt, int test_fold,
                                             const std::vector<trainer::TrainSample>& samples,
                                             const EvalOptions& opts) {
  require(test_fold == 1 || test_fold == 2, Err::config, "test fold must be 1 or 2");
  require(ckpt.config.train_fold != test_fold, Err::integrity,
          "checkpoint trained on fold " + std::to_string(ckpt.config.train_fold) +
              " cannot be scored on its own fold");
  opts.post.validate();

  const std::unordered_set<std::string> trained(ckpt.train_cases.begin(), ckpt.train_cases.end());
  for (const auto& s : samples)
    require(!trained.count(s.input.case_id), Err::integrity,
            "case '" + s.input.case_id + "' appears in the checkpoint's training roster");

  auto model = trainer::model_from_checkpoint(ckpt);
  model->set_training(false);
  const std::vector<std::string> class_names = ckpt.config.class_names();

  std::vector<metrics::MetricsRecord> records;
  for (const auto& sample : samples) {
    const int64_t h = sample.input.grid.h, w = sample.input.grid.w;
    const dataset::MaskSet& truth = sample.masks;
    if (!opts.match_truth_resolution)
      require(truth.h == h && truth.w == w, Err::contract,
              "ground truth for case '" + sample.input.case_id +
                  "' is not at the working resolution");
    require(truth.h == truth.w, Err::contract, "millimetre scaling needs square masks");

    dataset::MaskSet pred = predict_masks(*model, class_names, sample.input, opts.post);
    if (pred.h != truth.h || pred.w != truth.w) {
      for (auto& [name, m] : pred.masks) m = resize_nearest(m, truth.h, truth.w);
      pred.h = truth.h;
      pred.w = truth.w;
    }

    const double mm =
        metrics::mm_scale(dataset::kNativeSpacingMm, dataset::kNativeSize, truth.h);
    auto case_records = score_case(pred, truth, class_names, mm, opts.warn);
    records.insert(records.end(), std::make_move_iterator(case_records.begin()),
                   std::make_move_iterator(case_records.end()));
  }
  return records;
}

AggregateReport aggregate(const std::vector<metrics::MetricsRecord>& records) {
  require(!records.empty(), Err::degenerate_input, "no records to aggregate");

  struct Bucket {
    std::vector<double> dice, jaccard, macd;
    int64_t undefined = 0;
  };
  std::map<std::string, Bucket> buckets;
  for (const auto& r : records) {
    Bucket& b = buckets[r.structure];
    b.dice.push_back(r.dice);
    b.jaccard.push_back(r.jaccard);
    if (r.macd_mm)
      b.macd.push_back(*r.macd_mm);
    else
      ++b.undefined;
  }

  // Canonical structures first, anything else in name order after them.
  std::vector<std::string> order;
  for (const char* s : dataset::kStructures)
    if (buckets.count(s)) order.emplace_back(s);
  for (const auto& [name, _] : buckets)
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);

  AggregateReport report;
  report.n_records = int64_t(records.size());
  for (const auto& name : order) {
    Bucket& b = buckets.at(name);
    StructureStats st;
    st.structure = name;
    st.n_cases = int64_t(b.dice.size());
    std::tie(st.dice_mean, st.dice_std) = mean_pop_std(std::move(b.dice));
    std::tie(st.jaccard_mean, st.jaccard_std) = mean_pop_std(std::move(b.jaccard));
    st.n_macd = int64_t(b.macd.size());
    st.n_macd_undefined = b.undefined;
    if (!b.macd.empty())
      std::tie(st.macd_mean, st.macd_std) = mean_pop_std(std::move(b.macd));
    report.structures.push_back(std::move(st));
  }
  return report;
}

// --------------------------------------------------------------------------
// Overlay rendering

namespace {

// 5x7 glyphs, one byte per row, bit 4 = leftmost column. Covers the banner
// alphabet: structure initials, digits, dot, dash, space.
const uint8_t* glyph5x7(char c) {
  static const std::map<char, std::array<uint8_t, 7>> kFont = {
      {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
      {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
      {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
      {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
      {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
      {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
      {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
      {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
      {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
      {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
      {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
      {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
      {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
      {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
      {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
      {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
  };
  const auto it = kFont.find(c);
  return it == kFont.end() ? nullptr : it->second.data();
}

void draw_text(pnm::RgbImage& img, const std::string& text, int64_t top, int64_t left,
               int64_t scale) {
  int64_t x = left;
  for (char c : text) {
    if (x + 5 * scale > img.w) break;
    if (const uint8_t* rows = glyph5x7(c)) {
      for (int64_t r = 0; r < 7; ++r)
        for (int64_t col = 0; col < 5; ++col) {
          if (!((rows[r] >> (4 - col)) & 1)) continue;
          for (int64_t dr = 0; dr < scale; ++dr)
            for (int64_t dc = 0; dc < scale; ++dc) {
              uint8_t* px = img.px(top + r * scale + dr, x + col * scale + dc);
              px[0] = px[1] = px[2] = 255;
            }
        }
    }
    x += 6 * scale;
  }
}

}  // namespace

pnm::RgbImage render_overlay(const Grid<float>& base, const dataset::MaskSet& gt,
                             const dataset::MaskSet& pred, const std::string& structure) {
  require(!structure.empty(), Err::contract, "structure name must not be empty");
  const MaskGrid& g = gt.at(structure);
  const MaskGrid& p = pred.at(structure);
  require(g.h == base.h && g.w == base.w && p.h == base.h && p.w == base.w, Err::contract,
          "overlay inputs must share one resolution");

  const int64_t h = base.h, w = base.w;
  const int64_t scale = std::clamp<int64_t>(w / 112, 1, 4);
  const int64_t pad = 2 * scale;
  const int64_t banner = 7 * scale + 2 * pad;

  // Banner text: structure initial plus the overlap score of this pair.
  const char initial = char(std::toupper(static_cast<unsigned char>(structure[0])));
  std::string text;
  if (mask_empty(g) && mask_empty(p)) {
    text = std::string(1, initial) + " -";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c %.3f", initial, metrics::jaccard_index(p, g));
    text = buf;
  }

  float lo = base.data[0], hi = base.data[0];
  for (float v : base.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const float span = hi - lo;

  pnm::RgbImage img(banner + h, w);  // banner rows start out black
  draw_text(img, text, pad, pad, scale);
  for (int64_t r = 0; r < h; ++r) {
    for (int64_t c = 0; c < w; ++c) {
      uint8_t* px = img.px(banner + r, c);
      const bool in_g = g(r, c) != 0, in_p = p(r, c) != 0;
      if (in_g && in_p) {
        px[0] = 0, px[1] = 255, px[2] = 0;  // agreement
      } else if (in_g) {
        px[0] = 0, px[1] = 0, px[2] = 255;  // annotated but missed
      } else if (in_p) {
        px[0] = 255, px[1] = 0, px[2] = 0;  // predicted but not annotated
      } else {
        const float v = span > 0.0f ? (base(r, c) - lo) / span : 0.5f;
        const auto gray = uint8_t(std::lround(255.0f * v));
        px[0] = px[1] = px[2] = gray;
      }
    }
  }
  return img;
}

std::filesystem::path overlay_path(const std::filesystem::path& dir, const std::string& case_id,
                                   const std::string& structure) {
  return dir / (case_id + "_" + structure + ".ppm");
}

// --------------------------------------------------------------------------
// Comparison tables

const char* layout_name(ReportLayout layout) {
  switch (layout) {
    case ReportLayout::arch_table: return "arch_table";
    case ReportLayout::loss_table: return "loss_table";
    case ReportLayout::sota_table: return "sota_table";
  }
  fail(Err::contract, "unknown report layout");
}

namespace {

// Nine metric cells (three structures x dice/jaccard/distance) for one run.
// Missing structures render as dashes and flag the report as partial.
std::vector<std::string> metric_cells(const ReportRow& row, const WarnFn& warn) {
  std::vector<std::string> cells;
  for (const char* s : dataset::kStructures) {
    if (row.stats.has(s)) {
      const StructureStats& st = row.stats.at(s);
      cells.push_back(fmt3(st.dice_mean));
      cells.push_back(fmt3(st.jaccard_mean));
      cells.push_back(st.n_macd > 0 ? fmt3(st.macd_mean) : "-");
    } else {
      emit_warning(warn, std::string("partial report: run '") + row.label +
                             "' has no records for '" + s + "'");
      cells.insert(cells.end(), {"-", "-", "-"});
    }
  }
  return cells;
}

std::string join_md_row(const std::vector<std::string>& cells) {
  std::string line = "|";
  for (const auto& c : cells) line += " " + c + " |";
  return line + "\n";
}

std::string join_csv_row(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  return line + "\n";
}

std::string md_separator(size_t n) {
  std::string line = "|";
  for (size_t i = 0; i < n; ++i) line += "---|";
  return line + "\n";
}

ReportDocument grid_table(const std::vector<ReportRow>& rows, bool with_ft,
                          const std::string& label_header, const WarnFn& warn) {
  const std::vector<std::string> structure_headers = {"Lungs", "Heart", "Clavicles"};

  std::vector<std::string> md_head = {label_header};
  std::vector<std::string> csv_head = {label_header == "Architecture" ? "architecture" : "loss"};
  if (with_ft) {
    md_head.push_back("FT");
    csv_head.push_back("ft");
  }
  for (size_t i = 0; i < structure_headers.size(); ++i) {
    const std::string& s = structure_headers[i];
    md_head.insert(md_head.end(), {s + " D", s + " J", s + " MACD (mm)"});
    const std::string k = dataset::kStructures[i];
    csv_head.insert(csv_head.end(), {k + "_dice", k + "_jaccard", k + "_macd_mm"});
  }
  for (const char* s : dataset::kStructures)
    csv_head.push_back(std::string(s) + "_macd_undefined");

  ReportDocument doc;
  doc.markdown = join_md_row(md_head) + md_separator(md_head.size());
  doc.csv = join_csv_row(csv_head);
  if (rows.empty()) emit_warning(warn, "partial report: no runs supplied");

  std::string footnotes;
  for (const auto& row : rows) {
    std::vector<std::string> cells = {row.label};
    if (with_ft) cells.push_back(row.fine_tuned ? "v" : "");
    const auto metrics_cells = metric_cells(row, warn);
    cells.insert(cells.end(), metrics_cells.begin(), metrics_cells.end());
    doc.markdown += join_md_row(cells);

    for (const char* s : dataset::kStructures) {
      const int64_t undef = row.stats.has(s) ? row.stats.at(s).n_macd_undefined : 0;
      cells.push_back(std::to_string(undef));
      if (undef > 0)
        footnotes += "- " + row.label + ": " + std::to_string(undef) + " case(s) with no defined " +
                     s + " contour distance, excluded from the average\n";
    }
    doc.csv += join_csv_row(cells);
  }
  if (!footnotes.empty()) doc.markdown += "\n" + footnotes;
  return doc;
}

std::vector<std::string> sota_run_cells(const ReportRow& row, const std::string& structure) {
  const StructureStats& st = row.stats.at(structure);
  return {row.label, fmt_pm(st.dice_mean, st.dice_std), fmt_pm(st.jaccard_mean, st.jaccard_std),
          st.n_macd > 0 ? fmt_pm(st.macd_mean, st.macd_std) : "-"};
}

std::string csv_published(const PublishedScore& s, bool spread) {
  if (spread) return s.spread ? fmt3(*s.spread) : "";
  return s.mean ? fmt3(*s.mean) : "";
}

ReportDocument sota_table(const std::vector<ReportRow>& rows, const WarnFn& warn) {
  ReportDocument doc;
  doc.markdown = join_md_row({"Method", "Dice", "Jaccard", "MACD (mm)"}) + md_separator(4);
  doc.csv = join_csv_row({"structure", "method", "source", "dice_mean", "dice_spread",
                          "jaccard_mean", "jaccard_spread", "macd_mm_mean", "macd_mm_spread",
                          "origin"});
  if (rows.empty()) emit_warning(warn, "partial report: no runs supplied");

  const std::vector<std::string> display = {"Lungs", "Heart", "Clavicles"};
  for (size_t i = 0; i < display.size(); ++i) {
    const std::string structure = dataset::kStructures[i];
    doc.markdown += join_md_row({"**" + display[i] + "**", "", "", ""});
    for (const auto& ref : sota_reference_rows()) {
      if (structure != ref.structure) continue;
      doc.markdown += join_md_row({std::string(ref.method) + " — " + ref.source,
                                   fmt_published(ref.dice), fmt_published(ref.jaccard),
                                   fmt_published(ref.macd_mm)});
      doc.csv += join_csv_row({structure, ref.method, ref.source,
                               csv_published(ref.dice, false), csv_published(ref.dice, true),
                               csv_published(ref.jaccard, false), csv_published(ref.jaccard, true),
                               csv_published(ref.macd_mm, false), csv_published(ref.macd_mm, true),
                               "published"});
    }
    for (const auto& row : rows) {
      if (!row.stats.has(structure)) {
        emit_warning(warn, "partial report: run '" + row.label + "' has no records for '" +
                               structure + "'");
        continue;
      }
      const auto cells = sota_run_cells(row, structure);
      doc.markdown += join_md_row(cells);
      const StructureStats& st = row.stats.at(structure);
      doc.csv += join_csv_row({structure, row.label, "this run", fmt3(st.dice_mean),
                               fmt3(st.dice_std), fmt3(st.jaccard_mean), fmt3(st.jaccard_std),
                               st.n_macd > 0 ? fmt3(st.macd_mean) : "",
                               st.n_macd > 0 ? fmt3(st.macd_std) : "", "this_run"});
    }
  }
  return doc;
}

}  // namespace

ReportDocument emit_report(const std::vector<ReportRow>& rows, ReportLayout layout,
                           const WarnFn& warn) {
  switch (layout) {
    case ReportLayout::arch_table: return grid_table(rows, true, "Architecture", warn);
    case ReportLayout::loss_table: return grid_table(rows, false, "Loss", warn);
    case ReportLayout::sota_table: return sota_table(rows, warn);
  }
  fail(Err::contract, "unknown report layout");
}

void write_report(const std::filesystem::path& dir, ReportLayout layout,
                  const ReportDocument& doc) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, Err::io, "cannot create report directory '" + dir.string() + "'");
  const auto write_file = [&](const char* ext, const std::string& body) {
    const auto path = dir / (std::string(layout_name(layout)) + ext);
    std::ofstream out(path, std::ios::binary);
    out << body;
    require(bool(out), Err::io, "cannot write report file '" + path.string() + "'");
  };
  write_file(".md", doc.markdown);
  write_file(".csv", doc.csv);
}

// --------------------------------------------------------------------------
// Published reference numbers (quoted, never recomputed)

std::span<const ArchReferenceRow> arch_reference_rows() {
  static constexpr ArchReferenceRow kRows[] = {
      {"FCN", true, {0.976, 0.953, 1.341}, {0.944, 0.895, 3.099}, {0.884, 0.795, 1.277}},
      {"U-Net (VGG16)", true, {0.980, 0.961, 1.121}, {0.950, 0.906, 2.569}, {0.921, 0.855, 0.871}},
      {"FC DenseNet", false, {0.973, 0.947, 1.511}, {0.934, 0.879, 3.396}, {0.884, 0.796, 1.349}},
      {"DRN", false, {0.966, 0.935, 1.842}, {0.936, 0.881, 3.365}, {0.840, 0.727, 1.860}},
  };
  return kRows;
}

std::span<const LossReferenceRow> loss_reference_rows() {
  static constexpr LossReferenceRow kRows[] = {
      {"DSC", {0.980, 0.961, 1.121}, {0.950, 0.906, 2.569}, {0.921, 0.855, 0.871}},
      {"JSC", {0.979, 0.960, 1.082}, {0.949, 0.905, 2.602}, {0.921, 0.855, 0.920}},
      {"Tversky", {0.979, 0.960, 1.139}, {0.950, 0.905, 2.581}, {0.923, 0.858, 0.987}},
      {"BCE", {0.980, 0.961, 1.119}, {0.950, 0.906, 2.592}, {0.911, 0.838, 1.145}},
  };
  return kRows;
}

std::span<const SotaReferenceRow> sota_reference_rows() {
  using S = PublishedScore;
  static const SotaReferenceRow kRows[] = {
      {"Human observer", "SCR benchmark study", "lungs",
       S{}, S{0.946, 0.018}, S{1.64, 0.69}},
      {"Hybrid voting", "SCR benchmark study", "lungs",
       S{}, S{0.949, 0.020}, S{1.62, 0.66}},
      {"Ibragimov et al.", "prior published method", "lungs",
       S{}, S{0.953, 0.020}, S{1.43, 0.85}},
      {"Hwang and Park", "prior published method", "lungs",
       S{0.980, 0.008}, S{0.961, 0.015}, S{1.237, 0.702}},
      {"Novikov et al. (*)", "prior published method, non-benchmark split", "lungs",
       S{0.974, {}}, S{0.950, {}}, S{}},
      {"Yang et al.", "prior published method", "lungs",
       S{0.975, 0.001}, S{0.952, 0.018}, S{1.37, 0.67}},
      {"U-Net (VGG16)", "published reference run", "lungs",
       S{0.980, 0.008}, S{0.961, 0.014}, S{1.019, 0.564}},

      {"Human observer", "SCR benchmark study", "heart",
       S{}, S{0.878, 0.054}, S{3.78, 1.82}},
      {"Hybrid voting", "SCR benchmark study", "heart",
       S{}, S{0.860, 0.056}, S{4.24, 1.87}},
      {"Novikov et al. (*)", "prior published method, non-benchmark split", "heart",
       S{0.937, {}}, S{0.882, {}}, S{}},
      {"U-Net (VGG16)", "published reference run", "heart",
       S{0.950, 0.021}, S{0.906, 0.038}, S{2.549, 1.126}},

      {"Human observer", "SCR benchmark study", "clavicles",
       S{}, S{0.896, 0.037}, S{0.68, 0.26}},
      {"Hybrid voting", "SCR benchmark study", "clavicles",
       S{}, S{0.736, 0.106}, S{1.88, 0.93}},
      {"Novikov et al. (*)", "prior published method, non-benchmark split", "clavicles",
       S{0.929, {}}, S{0.868, {}}, S{}},
      {"U-Net (VGG16)", "published reference run", "clavicles",
       S{0.921, 0.027}, S{0.855, 0.045}, S{0.855, 0.322}},
  };
  return kRows;
}

std::array<double, 3> postprocessed_macd_reference_mm() { return {1.019, 2.549, 0.856}; }

}  // namespace cxr::evalbench
