#include "cxr/evalbench.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

using namespace cxr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("cxr_eval_" + std::to_string(reinterpret_cast<uintptr_t>(&counter)) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

MaskGrid rect_mask(int64_t h, int64_t w, int64_t r0, int64_t r1, int64_t c0, int64_t c1) {
  MaskGrid m(h, w, 0);
  for (int64_t r = r0; r <= r1; ++r)
    for (int64_t c = c0; c <= c1; ++c) m(r, c) = 1;
  return m;
}

// Mask set with one blob per structure, all far apart.
dataset::MaskSet fixture_truth(const std::string& case_id, int64_t hw = 64) {
  dataset::MaskSet m;
  m.case_id = case_id;
  m.h = hw;
  m.w = hw;
  m.masks.emplace("lungs", rect_mask(hw, hw, 8, 23, 6, 21));
  m.masks.emplace("heart", rect_mask(hw, hw, 34, 49, 10, 25));
  m.masks.emplace("clavicles", rect_mask(hw, hw, 4, 9, 36, 59));
  return m;
}

metrics::MetricsRecord make_record(const std::string& id, const std::string& structure,
                                   double dice, double jaccard, std::optional<double> macd) {
  metrics::MetricsRecord r;
  r.case_id = id;
  r.structure = structure;
  r.dice = dice;
  r.jaccard = jaccard;
  r.macd_mm = macd;
  return r;
}

trainer::TrainSample eval_sample(const std::string& id, uint64_t seed, int64_t hw = 64) {
  trainer::TrainSample s;
  s.input.case_id = id;
  s.input.grid = Grid<float>(hw, hw, 0.0f);
  Rng rng(seed);
  for (auto& v : s.input.grid.data) v = float(rng.normal(0.0, 0.3));
  s.masks = fixture_truth(id, hw);
  return s;
}

const std::vector<std::string> kAllStructures = {"lungs", "heart", "clavicles"};

}  // namespace

TEST_CASE("scoring ground truth against itself is a perfect result") {
  const auto truth = fixture_truth("case7");
  const auto records = evalbench::score_case(truth, truth, kAllStructures, 1.6);

  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    CHECK(r.case_id == "case7");
    CHECK(r.dice == 1.0);
    CHECK(r.jaccard == 1.0);
    REQUIRE(r.macd_mm.has_value());
    CHECK(*r.macd_mm == 0.0);
  }
  CHECK(records[0].structure == "lungs");
  CHECK(records[1].structure == "heart");
  CHECK(records[2].structure == "clavicles");
}

TEST_CASE("empty predictions score zero overlap with no distance value") {
  const auto truth = fixture_truth("case3");
  auto pred = truth;
  pred.masks["heart"] = MaskGrid(64, 64, 0);

  const auto records = evalbench::score_case(pred, truth, kAllStructures, 1.6);
  REQUIRE(records.size() == 3);
  CHECK(records[1].structure == "heart");
  CHECK(records[1].dice == 0.0);
  CHECK(records[1].jaccard == 0.0);
  CHECK_FALSE(records[1].macd_mm.has_value());
  // the untouched structures still score perfectly
  CHECK(records[0].dice == 1.0);
  CHECK(records[2].dice == 1.0);
}

TEST_CASE("scoring respects the pixel pitch and handles degenerate masks") {
  dataset::MaskSet truth;
  truth.case_id = "px";
  truth.h = truth.w = 16;
  MaskGrid a(16, 16, 0), b(16, 16, 0);
  a(8, 4) = 1;
  b(8, 7) = 1;  // three pixels apart, horizontally
  truth.masks.emplace("lungs", a);
  auto pred = truth;
  pred.masks["lungs"] = b;

  const auto scaled = evalbench::score_case(pred, truth, {"lungs"}, 2.5);
  REQUIRE(scaled.size() == 1);
  REQUIRE(scaled[0].macd_mm.has_value());
  CHECK(*scaled[0].macd_mm == doctest::Approx(3.0 * 2.5));

  // both masks empty: vacuous agreement, distance stays undefined
  dataset::MaskSet empty_truth;
  empty_truth.case_id = "void";
  empty_truth.h = empty_truth.w = 16;
  empty_truth.masks.emplace("lungs", MaskGrid(16, 16, 0));
  const auto vacuous = evalbench::score_case(empty_truth, empty_truth, {"lungs"}, 1.0);
  REQUIRE(vacuous.size() == 1);
  CHECK(vacuous[0].dice == 1.0);
  CHECK(vacuous[0].jaccard == 1.0);
  CHECK_FALSE(vacuous[0].macd_mm.has_value());

  CHECK_THROWS_AS(evalbench::score_case(pred, truth, {"lungs"}, 0.0), Error);
}

TEST_CASE("structures without ground truth are skipped with a warning") {
  const auto full = fixture_truth("case9");
  auto truth = full;
  truth.masks.erase("clavicles");

  std::vector<std::string> warnings;
  const auto records = evalbench::score_case(
      full, truth, kAllStructures, 1.6, [&](const std::string& w) { warnings.push_back(w); });

  CHECK(records.size() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("clavicles") != std::string::npos);
  CHECK(warnings[0].find("case9") != std::string::npos);

  // mismatched resolutions are a hard error, not a skip
  const auto small = fixture_truth("case9", 32);
  CHECK_THROWS_AS(evalbench::score_case(small, truth, kAllStructures, 1.6), Error);
}

TEST_CASE("evaluation runs a checkpoint over the held-out fold") {
  trainer::TrainConfig cfg;
  cfg.arch.name = arch::ArchName::fc_densenet;
  cfg.arch.num_classes = 3;
  cfg.loss.kind = losses::Kind::dsc;
  cfg.lr = 1e-4;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  cfg.seed = 5;
  cfg.train_fold = 1;
  cfg.augment.scale = 0.0;
  cfg.augment.translate = 0.0;
  cfg.augment.rotate_deg = 0.0;

  std::vector<trainer::TrainSample> train_data;
  for (int i = 0; i < 2; ++i)
    train_data.push_back(eval_sample("train" + std::to_string(i), 100 + uint64_t(i)));
  const trainer::Checkpoint ckpt = trainer::train(cfg, train_data);

  std::vector<trainer::TrainSample> test_data;
  for (int i = 0; i < 5; ++i)
    test_data.push_back(eval_sample("eval" + std::to_string(i), 200 + uint64_t(i)));
  test_data[3].masks.masks.erase("heart");  // one structure unannotated

  std::vector<std::string> warnings;
  evalbench::EvalOptions opts;
  opts.warn = [&](const std::string& w) { warnings.push_back(w); };

  const auto records = evalbench::evaluate(ckpt, 2, test_data, opts);

  // three structures per case, minus the single skipped one
  CHECK(records.size() == 3 * 5 - 1);
  CHECK(warnings.size() == 1);
  for (const auto& r : records) {
    CHECK(r.dice >= 0.0);
    CHECK(r.dice <= 1.0);
    CHECK(r.jaccard >= 0.0);
    CHECK(r.jaccard <= 1.0);
    if (r.macd_mm) CHECK(*r.macd_mm >= 0.0);
  }
  const auto heartless =
      std::count_if(records.begin(), records.end(),
                    [](const auto& r) { return r.case_id == "eval3"; });
  CHECK(heartless == 2);

  // reruns of the same checkpoint score identically
  evalbench::EvalOptions quiet;
  const auto again = evalbench::evaluate(ckpt, 2, test_data, quiet);
  REQUIRE(again.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].dice == records[i].dice);
    CHECK(again[i].jaccard == records[i].jaccard);
    CHECK(again[i].macd_mm == records[i].macd_mm);
  }
}

TEST_CASE("evaluation rejects fold leakage") {
  trainer::TrainConfig cfg;
  cfg.arch.name = arch::ArchName::fc_densenet;
  cfg.arch.num_classes = 3;
  cfg.loss.kind = losses::Kind::dsc;
  cfg.lr = 1e-4;
  cfg.epochs = 1;
  cfg.batch_size = 4;
  cfg.seed = 11;
  cfg.train_fold = 1;
  cfg.augment.scale = 0.0;
  cfg.augment.translate = 0.0;
  cfg.augment.rotate_deg = 0.0;

  std::vector<trainer::TrainSample> train_data = {eval_sample("shared", 42)};
  const trainer::Checkpoint ckpt = trainer::train(cfg, train_data);

  std::vector<trainer::TrainSample> test_data = {eval_sample("fresh", 43)};

  // scoring the checkpoint on its own training fold
  CHECK_THROWS_WITH_AS(static_cast<void>(evalbench::evaluate(ckpt, 1, test_data)),
                       doctest::Contains("its own fold"), Error);
  // a training case smuggled into the test set
  std::vector<trainer::TrainSample> tainted = {eval_sample("shared", 44)};
  CHECK_THROWS_WITH_AS(static_cast<void>(evalbench::evaluate(ckpt, 2, tainted)),
                       doctest::Contains("training roster"), Error);
  // nonsense fold id
  CHECK_THROWS_AS(static_cast<void>(evalbench::evaluate(ckpt, 3, test_data)), Error);

  try {
    static_cast<void>(evalbench::evaluate(ckpt, 1, test_data));
    FAIL("expected an integrity error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::integrity);
  }
}

TEST_CASE("aggregation pools records into per-structure statistics") {
  std::vector<metrics::MetricsRecord> records = {
      make_record("a", "lungs", 0.9, 0.8, 1.0),
      make_record("b", "lungs", 1.0, 0.9, 3.0),
      make_record("a", "heart", 0.7, 0.6, std::nullopt),
  };
  const auto report = evalbench::aggregate(records);

  CHECK(report.n_records == 3);
  REQUIRE(report.structures.size() == 2);
  // canonical structure order regardless of record order
  CHECK(report.structures[0].structure == "lungs");
  CHECK(report.structures[1].structure == "heart");

  const auto& lungs = report.at("lungs");
  CHECK(lungs.n_cases == 2);
  CHECK(lungs.dice_mean == doctest::Approx(0.95));
  CHECK(lungs.dice_std == doctest::Approx(0.05));
  CHECK(lungs.jaccard_mean == doctest::Approx(0.85));
  CHECK(lungs.n_macd == 2);
  CHECK(lungs.n_macd_undefined == 0);
  CHECK(lungs.macd_mean == doctest::Approx(2.0));
  CHECK(lungs.macd_std == doctest::Approx(1.0));

  const auto& heart = report.at("heart");
  CHECK(heart.n_cases == 1);
  CHECK(heart.dice_mean == 0.7);
  CHECK(heart.dice_std == 0.0);  // a single value has no spread
  CHECK(heart.n_macd == 0);
  CHECK(heart.n_macd_undefined == 1);

  CHECK_FALSE(report.has("clavicles"));
  CHECK_THROWS_AS(report.at("clavicles"), Error);
  CHECK_THROWS_AS(evalbench::aggregate({}), Error);
}

TEST_CASE("aggregation is exactly permutation invariant") {
  std::vector<metrics::MetricsRecord> records;
  Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    const auto& s = kAllStructures[size_t(i) % 3];
    std::optional<double> macd;
    if (i % 5 != 0) macd = rng.uniform(0.3, 4.0);
    records.push_back(make_record("c" + std::to_string(i), s, rng.uniform(0.5, 1.0),
                                  rng.uniform(0.4, 1.0), macd));
  }
  auto shuffled = records;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 13, shuffled.end());

  const auto a = evalbench::aggregate(records);
  const auto b = evalbench::aggregate(shuffled);
  REQUIRE(a.structures.size() == b.structures.size());
  for (size_t i = 0; i < a.structures.size(); ++i) {
    const auto& x = a.structures[i];
    const auto& y = b.structures[i];
    CHECK(x.structure == y.structure);
    CHECK(x.n_cases == y.n_cases);
    CHECK(x.dice_mean == y.dice_mean);
    CHECK(x.dice_std == y.dice_std);
    CHECK(x.jaccard_mean == y.jaccard_mean);
    CHECK(x.jaccard_std == y.jaccard_std);
    CHECK(x.n_macd == y.n_macd);
    CHECK(x.n_macd_undefined == y.n_macd_undefined);
    CHECK(x.macd_mean == y.macd_mean);
    CHECK(x.macd_std == y.macd_std);
    CHECK(x.dice_std >= 0.0);
    CHECK(x.jaccard_std >= 0.0);
    CHECK(x.macd_std >= 0.0);
  }
}

TEST_CASE("overlays partition pixels into the truth and prediction colors") {
  const int64_t hw = 64;
  Grid<float> base(hw, hw, 0.0f);
  Rng rng(17);
  for (auto& v : base.data) v = float(rng.normal(0.0, 1.0));

  dataset::MaskSet gt, pred;
  gt.case_id = pred.case_id = "ov";
  gt.h = gt.w = pred.h = pred.w = hw;
  gt.masks.emplace("heart", rect_mask(hw, hw, 10, 29, 10, 29));
  pred.masks.emplace("heart", rect_mask(hw, hw, 10, 29, 20, 39));

  const auto img = evalbench::render_overlay(base, gt, pred, "heart");
  REQUIRE(img.w == hw);
  REQUIRE(img.h > hw);
  const int64_t banner = img.h - hw;

  const auto& g = gt.at("heart");
  const auto& p = pred.at("heart");
  int64_t blue = 0, red = 0, green = 0, white = 0;
  for (int64_t r = 0; r < img.h; ++r) {
    for (int64_t c = 0; c < img.w; ++c) {
      const uint8_t* px = img.px(r, c);
      const bool is_blue = px[0] == 0 && px[1] == 0 && px[2] == 255;
      const bool is_red = px[0] == 255 && px[1] == 0 && px[2] == 0;
      const bool is_green = px[0] == 0 && px[1] == 255 && px[2] == 0;
      const bool is_gray = px[0] == px[1] && px[1] == px[2];
      CHECK((is_blue || is_red || is_green || is_gray));
      if (r < banner) {
        CHECK((is_gray));  // the banner is monochrome text
        white += px[0] == 255;
        continue;
      }
      blue += is_blue;
      red += is_red;
      green += is_green;
      if (!is_blue && !is_red && !is_green) {
        // outside both masks, and never a pure overlay color
        CHECK_FALSE((g(r - banner, c) != 0 || p(r - banner, c) != 0));
      } else {
        const bool in_g = g(r - banner, c) != 0, in_p = p(r - banner, c) != 0;
        CHECK(is_green == (in_g && in_p));
        CHECK(is_blue == (in_g && !in_p));
        CHECK(is_red == (!in_g && in_p));
      }
    }
  }
  // half-overlapping 20x20 squares: 200 px of each color
  CHECK(blue == 200);
  CHECK(red == 200);
  CHECK(green == 200);
  CHECK(white > 0);  // the banner carries legible text
}

TEST_CASE("overlay edge cases follow the mask relationship") {
  Grid<float> base(48, 48, 0.25f);
  dataset::MaskSet gt;
  gt.case_id = "e";
  gt.h = gt.w = 48;
  gt.masks.emplace("lungs", rect_mask(48, 48, 5, 14, 5, 14));

  auto count_colors = [](const pnm::RgbImage& img) {
    int64_t blue = 0, red = 0, green = 0;
    for (int64_t i = 0; i < img.h * img.w; ++i) {
      const uint8_t* px = img.data.data() + 3 * i;
      blue += px[0] == 0 && px[1] == 0 && px[2] == 255;
      red += px[0] == 255 && px[1] == 0 && px[2] == 0;
      green += px[0] == 0 && px[1] == 255 && px[2] == 0;
    }
    return std::array<int64_t, 3>{blue, red, green};
  };

  // perfect prediction: everything agreement-colored
  const auto perfect = count_colors(evalbench::render_overlay(base, gt, gt, "lungs"));
  CHECK(perfect[0] == 0);
  CHECK(perfect[1] == 0);
  CHECK(perfect[2] == 100);

  // empty prediction: annotation color only
  auto empty_pred = gt;
  empty_pred.masks["lungs"] = MaskGrid(48, 48, 0);
  const auto missed = count_colors(evalbench::render_overlay(base, gt, empty_pred, "lungs"));
  CHECK(missed[0] == 100);
  CHECK(missed[1] == 0);
  CHECK(missed[2] == 0);

  // resolution mismatch and unknown structures are contract errors
  Grid<float> small(32, 32, 0.0f);
  CHECK_THROWS_AS(evalbench::render_overlay(small, gt, gt, "lungs"), Error);
  CHECK_THROWS_AS(evalbench::render_overlay(base, gt, gt, "spine"), Error);
}

TEST_CASE("architecture and loss tables carry nine metric columns per run") {
  std::vector<metrics::MetricsRecord> records;
  for (const auto& s : kAllStructures) {
    records.push_back(make_record("a", s, 0.9, 0.8, 1.5));
    records.push_back(make_record("b", s, 0.8, 0.7, std::nullopt));
  }
  evalbench::ReportRow row{"U-Net (VGG16)", true, evalbench::aggregate(records)};

  const auto doc = evalbench::emit_report({row}, evalbench::ReportLayout::arch_table);

  std::vector<std::string> lines;
  std::istringstream md(doc.markdown);
  for (std::string line; std::getline(md, line);) lines.push_back(line);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0].find("Architecture") != std::string::npos);
  CHECK(lines[0].find("FT") != std::string::npos);
  CHECK(lines[0].find("Lungs D") != std::string::npos);
  CHECK(lines[0].find("Clavicles MACD") != std::string::npos);

  // label + FT + 3 structures x 3 metrics = 11 cells in the data row
  const std::string& data = lines[2];
  CHECK(std::count(data.begin(), data.end(), '|') == 12);
  CHECK(data.find("U-Net (VGG16)") != std::string::npos);
  CHECK(data.find("0.850") != std::string::npos);  // dice mean
  CHECK(data.find("1.500") != std::string::npos);  // only the defined distance

  // undefined distances surface as a footnote and a CSV count
  CHECK(doc.markdown.find("excluded from the average") != std::string::npos);
  CHECK(doc.csv.find("lungs_macd_undefined") != std::string::npos);
  std::istringstream csv(doc.csv);
  std::string csv_header, csv_row;
  std::getline(csv, csv_header);
  std::getline(csv, csv_row);
  CHECK(std::count(csv_header.begin(), csv_header.end(), ',') ==
        std::count(csv_row.begin(), csv_row.end(), ','));

  // the loss layout drops the fine-tuning column
  const auto loss_doc = evalbench::emit_report({row}, evalbench::ReportLayout::loss_table);
  CHECK(loss_doc.markdown.find("| Loss |") == 0);
  CHECK(loss_doc.markdown.find("FT") == std::string::npos);

  // partial rows warn but still render
  std::vector<metrics::MetricsRecord> lungs_only = {make_record("a", "lungs", 0.9, 0.8, 1.0)};
  evalbench::ReportRow partial{"partial", false, evalbench::aggregate(lungs_only)};
  std::vector<std::string> warnings;
  const auto partial_doc =
      evalbench::emit_report({partial}, evalbench::ReportLayout::arch_table,
                             [&](const std::string& w) { warnings.push_back(w); });
  CHECK(warnings.size() == 2);
  CHECK(partial_doc.markdown.find("- | - | -") != std::string::npos);
}

TEST_CASE("published reference numbers are pinned") {
  const auto archs = evalbench::arch_reference_rows();
  REQUIRE(archs.size() == 4);
  const auto& unet = archs[1];
  CHECK(std::string(unet.architecture) == "U-Net (VGG16)");
  CHECK(unet.fine_tuned);
  CHECK(unet.lungs.dice == 0.980);
  CHECK(unet.lungs.jaccard == 0.961);
  CHECK(unet.lungs.macd_mm == 1.121);
  CHECK(unet.heart.dice == 0.950);
  CHECK(unet.heart.jaccard == 0.906);
  CHECK(unet.heart.macd_mm == 2.569);
  CHECK(unet.clavicles.dice == 0.921);
  CHECK(unet.clavicles.jaccard == 0.855);
  CHECK(unet.clavicles.macd_mm == 0.871);

  const auto losses = evalbench::loss_reference_rows();
  REQUIRE(losses.size() == 4);
  CHECK(std::string(losses[0].loss) == "DSC");
  CHECK(losses[0].lungs.macd_mm == 1.121);
  CHECK(std::string(losses[2].loss) == "Tversky");
  CHECK(losses[2].clavicles.jaccard == 0.858);

  const auto post = evalbench::postprocessed_macd_reference_mm();
  CHECK(post[0] == 1.019);
  CHECK(post[1] == 2.549);
  CHECK(post[2] == 0.856);

  // the leaderboard keeps the flagship rows and their reported spreads
  bool found_lungs_row = false;
  for (const auto& row : evalbench::sota_reference_rows()) {
    if (std::string(row.method) == "U-Net (VGG16)" && std::string(row.structure) == "lungs") {
      found_lungs_row = true;
      CHECK(*row.dice.mean == 0.980);
      CHECK(*row.dice.spread == 0.008);
      CHECK(*row.jaccard.mean == 0.961);
      CHECK(*row.jaccard.spread == 0.014);
      CHECK(*row.macd_mm.mean == 1.019);
      CHECK(*row.macd_mm.spread == 0.564);
    }
  }
  CHECK(found_lungs_row);
}

TEST_CASE("the leaderboard table interleaves published rows with this run") {
  std::vector<metrics::MetricsRecord> records;
  for (const auto& s : kAllStructures) {
    records.push_back(make_record("a", s, 0.97, 0.95, 1.1));
    records.push_back(make_record("b", s, 0.99, 0.97, 0.9));
  }
  evalbench::ReportRow row{"this pipeline", true, evalbench::aggregate(records)};

  const auto doc = evalbench::emit_report({row}, evalbench::ReportLayout::sota_table);

  CHECK(doc.markdown.find("**Lungs**") != std::string::npos);
  CHECK(doc.markdown.find("**Heart**") != std::string::npos);
  CHECK(doc.markdown.find("**Clavicles**") != std::string::npos);
  CHECK(doc.markdown.find("Human observer") != std::string::npos);
  CHECK(doc.markdown.find("0.961±0.014") != std::string::npos);
  CHECK(doc.markdown.find("1.019±0.564") != std::string::npos);
  CHECK(doc.markdown.find("0.946±0.018") != std::string::npos);
  CHECK(doc.markdown.find("this pipeline") != std::string::npos);
  CHECK(doc.markdown.find("0.980±") != std::string::npos);

  // every leaderboard reference lands in the CSV, plus one run row per section
  const auto refs = evalbench::sota_reference_rows();
  size_t csv_lines = 0;
  std::istringstream csv(doc.csv);
  for (std::string line; std::getline(csv, line);) ++csv_lines;
  CHECK(csv_lines == 1 + refs.size() + 3);
  CHECK(doc.csv.find("this_run") != std::string::npos);

  // identical inputs render byte-identical documents
  const auto doc2 = evalbench::emit_report({row}, evalbench::ReportLayout::sota_table);
  CHECK(doc.markdown == doc2.markdown);
  CHECK(doc.csv == doc2.csv);

  std::vector<std::string> warnings;
  const auto bare = evalbench::emit_report({}, evalbench::ReportLayout::sota_table,
                                           [&](const std::string& w) { warnings.push_back(w); });
  CHECK(warnings.size() == 1);
  CHECK(bare.markdown.find("Human observer") != std::string::npos);
}

TEST_CASE("reports and overlays land in their run directory") {
  TempDir tmp;
  std::vector<metrics::MetricsRecord> records;
  for (const auto& s : kAllStructures) records.push_back(make_record("a", s, 0.9, 0.8, 1.0));
  evalbench::ReportRow row{"run", false, evalbench::aggregate(records)};
  const auto doc = evalbench::emit_report({row}, evalbench::ReportLayout::loss_table);

  evalbench::write_report(tmp.path / "report", evalbench::ReportLayout::loss_table, doc);
  std::ifstream md(tmp.path / "report" / "loss_table.md", std::ios::binary);
  REQUIRE(md.good());
  std::stringstream buf;
  buf << md.rdbuf();
  CHECK(buf.str() == doc.markdown);
  std::ifstream csv(tmp.path / "report" / "loss_table.csv", std::ios::binary);
  REQUIRE(csv.good());

  CHECK(evalbench::overlay_path("report/overlays", "JPCLN001", "heart") ==
        fs::path("report/overlays/JPCLN001_heart.ppm"));
  CHECK(std::string(evalbench::layout_name(evalbench::ReportLayout::arch_table)) == "arch_table");
}
