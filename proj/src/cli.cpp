#include "cxr/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cxr/arch/model.hpp"
#include "cxr/common.hpp"
#include "cxr/core/config.hpp"
#include "cxr/core/pnm.hpp"
#include "cxr/dataset.hpp"
#include "cxr/evalbench.hpp"
#include "cxr/losses.hpp"
#include "cxr/metrics.hpp"
#include "cxr/postproc.hpp"
#include "cxr/selfcheck.hpp"
#include "cxr/trainer.hpp"

namespace cxr::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Validation problems (bad user input of any kind) exit 1; failures arising
// after inputs were accepted exit 2.
int exit_code_for(Err e) {
  switch (e) {
    case Err::config:
    case Err::malformed_file:
    case Err::format:
    case Err::depth_violation:
    case Err::incomplete_ground_truth:
    case Err::split_integrity:
    case Err::degenerate_input:
    case Err::weight_load:
    case Err::io:
      return 1;
    default:
      return 2;
  }
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

fs::path resolve_data_root(const std::string& flag, const config::Config* cfg) {
  std::string root = flag;
  if (root.empty() && cfg && cfg->has("data.root")) root = cfg->get_str("data.root");
  if (root.empty()) root = env_or_empty("CXRSEG_DATA_ROOT");
  require(!root.empty(), Err::config,
          "no data root: pass --data, set data.root in the config, or export CXRSEG_DATA_ROOT");
  require(fs::is_directory(root), Err::config, "data root is not a directory: " + root);
  return root;
}

// The manifest is a cache: when absent, lay down the standard odd/even split
// so every verb is usable straight from a fresh corpus.
dataset::FoldSplit load_split(const fs::path& root, const std::string& manifest_flag,
                              std::ostream& err) {
  const fs::path manifest = manifest_flag.empty() ? root / "folds.csv" : fs::path(manifest_flag);
  if (!fs::exists(manifest)) {
    err << "note: fold manifest " << manifest.string()
        << " missing; writing the standard odd/even split\n";
    if (manifest.has_parent_path()) fs::create_directories(manifest.parent_path());
    dataset::write_official_manifest(manifest);
  }
  return dataset::make_fold_split(dataset::all_case_ids(), manifest);
}

void truncate_split(dataset::FoldSplit& s, int64_t limit) {
  if (limit <= 0) return;
  if (int64_t(s.fold1.size()) > limit) s.fold1.resize(size_t(limit));
  if (int64_t(s.fold2.size()) > limit) s.fold2.resize(size_t(limit));
}

trainer::TrainSample load_sample(const fs::path& root, const std::string& id) {
  trainer::TrainSample s;
  s.input = dataset::preprocess(dataset::load_jsrt_file(root / "images" / (id + ".IMG"), true));
  s.masks = dataset::load_masks(id, root / "masks", dataset::kWorkingSize, dataset::kWorkingSize);
  return s;
}

trainer::TrainConfig train_config_from(const config::Config& cfg) {
  static const std::set<std::string> known = {
      "arch.name",     "arch.pretrained",  "loss.kind",          "loss.alpha",
      "loss.beta",     "loss.epsilon",     "trainer.lr",         "trainer.epochs",
      "trainer.batch_size", "trainer.seed", "trainer.class_mode", "trainer.structure",
      "augment.scale", "augment.translate", "augment.rotate_deg", "data.root",
      "weights.path",  "run.name"};
  for (const auto& [k, v] : cfg.entries())
    require(known.count(k) != 0, Err::config, "unknown config key: " + k);

  trainer::TrainConfig tc;
  tc.arch.name = arch::arch_from_string(cfg.get_str("arch.name", "unet_vgg16"));
  tc.arch.pretrained_encoder = cfg.get_bool("arch.pretrained", false);
  tc.loss.kind = losses::kind_from_string(cfg.get_str("loss.kind", "dsc"));
  tc.loss.alpha = cfg.get_f64("loss.alpha", tc.loss.alpha);
  tc.loss.beta = cfg.get_f64("loss.beta", tc.loss.beta);
  tc.loss.epsilon = cfg.get_f64("loss.epsilon", tc.loss.epsilon);
  const std::string mode = cfg.get_str("trainer.class_mode", "multi");
  require(mode == "multi" || mode == "single", Err::config,
          "trainer.class_mode must be multi or single, got '" + mode + "'");
  tc.class_mode = mode == "multi" ? trainer::ClassMode::multi : trainer::ClassMode::single;
  tc.structure = cfg.get_str("trainer.structure", "");
  tc.arch.num_classes =
      tc.class_mode == trainer::ClassMode::multi ? int64_t(dataset::kStructures.size()) : 1;
  tc.lr = cfg.get_f64("trainer.lr", tc.lr);
  tc.epochs = cfg.get_i64("trainer.epochs", tc.epochs);
  tc.batch_size = cfg.get_i64("trainer.batch_size", tc.batch_size);
  tc.seed = uint64_t(cfg.get_i64("trainer.seed", 0));
  tc.augment.scale = cfg.get_f64("augment.scale", tc.augment.scale);
  tc.augment.translate = cfg.get_f64("augment.translate", tc.augment.translate);
  tc.augment.rotate_deg = cfg.get_f64("augment.rotate_deg", tc.augment.rotate_deg);
  tc.validate();
  return tc;
}

postproc::PostprocParams post_params(double threshold, double min_area, bool no_hole_fill) {
  postproc::PostprocParams post;
  if (threshold >= 0) post.threshold = threshold;
  if (min_area >= 0) post.min_area_fraction = min_area;
  post.hole_fill = !no_hole_fill;
  return post;
}

std::string fmt_stats_line(const evalbench::StructureStats& s) {
  char buf[192];
  if (s.n_macd > 0)
    std::snprintf(buf, sizeof(buf),
                  "%-10s dice %.3f+/-%.3f  jaccard %.3f+/-%.3f  macd %.3f+/-%.3f mm  "
                  "(n=%lld, undefined %lld)",
                  s.structure.c_str(), s.dice_mean, s.dice_std, s.jaccard_mean, s.jaccard_std,
                  s.macd_mean, s.macd_std, (long long)s.n_cases, (long long)s.n_macd_undefined);
  else
    std::snprintf(buf, sizeof(buf),
                  "%-10s dice %.3f+/-%.3f  jaccard %.3f+/-%.3f  macd n/a  "
                  "(n=%lld, undefined %lld)",
                  s.structure.c_str(), s.dice_mean, s.dice_std, s.jaccard_mean, s.jaccard_std,
                  (long long)s.n_cases, (long long)s.n_macd_undefined);
  return buf;
}

// ---------------------------------------------------------------------- ingest

struct IngestArgs {
  std::string data, manifest;
  std::vector<std::string> cases;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path root = resolve_data_root(a.data, nullptr);
  const auto all = dataset::all_case_ids();
  const std::set<std::string> known(all.begin(), all.end());
  const std::vector<std::string>& ids = a.cases.empty() ? all : a.cases;
  for (const auto& id : ids) require(known.count(id) != 0, Err::config, "unknown case id: " + id);

  int64_t bad = 0, warned = 0;
  for (const auto& id : ids) {
    try {
      (void)dataset::load_jsrt_file(root / "images" / (id + ".IMG"), true);
      const auto masks =
          dataset::load_masks(id, root / "masks", dataset::kNativeSize, dataset::kNativeSize);
      for (const auto& w : dataset::quality_warnings(masks)) {
        err << "warning: " << w << "\n";
        ++warned;
      }
    } catch (const Error& e) {
      err << "error: " << id << ": " << e.what() << "\n";
      ++bad;
    }
  }

  const fs::path manifest = a.manifest.empty() ? root / "folds.csv" : fs::path(a.manifest);
  if (manifest.has_parent_path()) fs::create_directories(manifest.parent_path());
  dataset::write_official_manifest(manifest);
  const auto split = dataset::make_fold_split(all, manifest);

  out << "validated " << (int64_t(ids.size()) - bad) << "/" << ids.size() << " case(s), "
      << warned << " data-quality warning(s)\n";
  out << "fold manifest: " << manifest.string() << " (" << split.fold1.size() << "/"
      << split.fold2.size() << " cases)\n";
  if (bad > 0) {
    err << "corpus incomplete: " << bad << " case(s) failed validation\n";
    return 1;
  }
  return 0;
}

// ----------------------------------------------------------------------- train

struct TrainArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string data, out_dir, weights, manifest;
  int64_t limit = 0;
  int64_t seed = -1;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  config::Config cfg = config::Config::parse_file(a.config_path);
  for (const auto& kv : a.overrides) cfg.apply_override(kv);
  if (a.seed >= 0) cfg.set("trainer.seed", std::to_string(a.seed));
  const trainer::TrainConfig tc = train_config_from(cfg);

  // Resolve everything fallible before the slow corpus load.
  archive::TensorMap weights;
  const archive::TensorMap* pretrained = nullptr;
  if (tc.arch.pretrained_encoder) {
    std::string wpath = a.weights;
    if (wpath.empty() && cfg.has("weights.path")) wpath = cfg.get_str("weights.path");
    if (wpath.empty()) wpath = env_or_empty("CXRSEG_WEIGHTS");
    require(!wpath.empty(), Err::config,
            "pretrained encoder requested: pass --weights, set weights.path in the config, "
            "or export CXRSEG_WEIGHTS");
    weights = arch::load_vgg16_archive(wpath);
    pretrained = &weights;
  }
  const std::string run_name =
      cfg.get_str("run.name", std::string(arch::arch_name(tc.arch.name)) + "-" +
                                  losses::kind_name(tc.loss.kind));
  const fs::path out_dir = a.out_dir.empty() ? fs::path("runs") / run_name : fs::path(a.out_dir);
  fs::create_directories(out_dir);

  const fs::path root = resolve_data_root(a.data, &cfg);
  dataset::FoldSplit split = load_split(root, a.manifest, err);
  truncate_split(split, a.limit);

  err << "loading " << split.fold1.size() + split.fold2.size() << " case(s) from "
      << root.string() << "\n";
  std::vector<trainer::TrainSample> samples;
  for (const auto& id : split.fold1) samples.push_back(load_sample(root, id));
  for (const auto& id : split.fold2) samples.push_back(load_sample(root, id));

  int fold_banner = 0;
  trainer::TrainHooks hooks;
  hooks.on_epoch = [&](const trainer::EpochLog& log) {
    if (log.epoch == 1) ++fold_banner;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "fold %d epoch %lld/%lld: mean loss %.6f (%.1fs)",
                  fold_banner, (long long)log.epoch, (long long)tc.epochs, log.mean_loss,
                  log.seconds);
    err << buf << "\n";
  };

  const auto [ck1, ck2] = trainer::train_two_fold(tc, samples, split, hooks, pretrained);

  for (const auto* ck : {&ck1, &ck2}) {
    const fs::path fold_dir = out_dir / ("fold" + std::to_string(ck->config.train_fold));
    fs::create_directories(fold_dir);
    trainer::save_checkpoint(fold_dir / "checkpoint.bin", *ck);
    trainer::write_train_log(fold_dir / "train_log.csv", *ck);
    out << "fold " << ck->config.train_fold << ": "
        << (fold_dir / "checkpoint.bin").string() << " (final mean loss "
        << ck->loss_history.back() << ")\n";
  }
  // Resolved settings, re-runnable as a config file.
  std::ofstream rc(out_dir / "run_config.txt");
  for (const auto& [k, v] : cfg.entries()) rc << k << " = " << v << "\n";
  if (!cfg.has("trainer.seed")) rc << "trainer.seed = " << tc.seed << "\n";
  return 0;
}

// -------------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string run_dir, data, out_dir, manifest;
  bool overlays = false, match_truth = false, no_hole_fill = false;
  int64_t limit = 0;
  double threshold = -1.0, min_area = -1.0;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path run_dir = a.run_dir;
  const fs::path p1 = run_dir / "fold1" / "checkpoint.bin";
  const fs::path p2 = run_dir / "fold2" / "checkpoint.bin";
  require(fs::exists(p1) && fs::exists(p2), Err::config,
          "run directory needs fold1/checkpoint.bin and fold2/checkpoint.bin: " +
              run_dir.string());
  const trainer::Checkpoint ck1 = trainer::load_checkpoint(p1);
  const trainer::Checkpoint ck2 = trainer::load_checkpoint(p2);
  require(ck1.config.train_fold != ck2.config.train_fold, Err::integrity,
          "both checkpoints were trained on the same fold");

  const fs::path root = resolve_data_root(a.data, nullptr);
  dataset::FoldSplit split = load_split(root, a.manifest, err);
  truncate_split(split, a.limit);

  evalbench::EvalOptions opts;
  opts.post = post_params(a.threshold, a.min_area, a.no_hole_fill);
  opts.match_truth_resolution = a.match_truth;
  opts.warn = [&err](const std::string& m) { err << "warning: " << m << "\n"; };

  std::vector<metrics::MetricsRecord> records;
  std::vector<std::pair<const trainer::Checkpoint*, std::vector<trainer::TrainSample>>> scored;
  for (const auto* ck : {&ck1, &ck2}) {
    const int test_fold = ck->config.train_fold == 1 ? 2 : 1;
    const auto& ids = test_fold == 1 ? split.fold1 : split.fold2;
    err << "fold " << ck->config.train_fold << " checkpoint: scoring " << ids.size()
        << " held-out case(s)\n";
    std::vector<trainer::TrainSample> samples;
    for (const auto& id : ids) samples.push_back(load_sample(root, id));
    const auto recs = evalbench::evaluate(*ck, test_fold, samples, opts);
    records.insert(records.end(), recs.begin(), recs.end());
    if (a.overlays) scored.emplace_back(ck, std::move(samples));
  }

  const fs::path out_dir = a.out_dir.empty() ? run_dir / "eval" : fs::path(a.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream rec_file(out_dir / "records.csv");
    rec_file << metrics::csv_header() << "\n";
    for (const auto& r : records) rec_file << metrics::csv_row(r) << "\n";
  }
  {
    json meta;
    meta["architecture"] = arch::arch_name(ck1.config.arch.name);
    meta["pretrained"] = ck1.config.arch.pretrained_encoder;
    meta["loss"] = losses::kind_name(ck1.config.loss.kind);
    meta["class_mode"] = ck1.config.class_mode == trainer::ClassMode::multi ? "multi" : "single";
    meta["records"] = int64_t(records.size());
    meta["postproc"] = {{"threshold", opts.post.threshold},
                        {"min_area_fraction", opts.post.min_area_fraction},
                        {"hole_fill", opts.post.hole_fill}};
    meta["match_truth_resolution"] = opts.match_truth_resolution;
    std::ofstream(out_dir / "meta.json") << meta.dump(2) << "\n";
  }

  const auto agg = evalbench::aggregate(records);
  for (const auto& s : agg.structures) out << fmt_stats_line(s) << "\n";
  out << "records: " << (out_dir / "records.csv").string() << " (" << records.size()
      << " rows)\n";

  if (a.overlays) {
    const fs::path odir = out_dir / "overlays";
    fs::create_directories(odir);
    int64_t n = 0;
    for (const auto& [ck, samples] : scored) {
      const auto model = trainer::model_from_checkpoint(*ck);
      model->set_training(false);
      const auto names = ck->config.class_names();
      for (const auto& s : samples) {
        const auto pred = evalbench::predict_masks(*model, names, s.input, opts.post);
        for (const auto& name : names) {
          if (s.masks.masks.find(name) == s.masks.masks.end()) continue;
          const auto img = evalbench::render_overlay(s.input.grid, s.masks, pred, name);
          pnm::write_ppm(evalbench::overlay_path(odir, s.input.case_id, name), img);
          ++n;
        }
      }
    }
    out << "wrote " << n << " overlay(s) to " << odir.string() << "\n";
  }
  return 0;
}

// --------------------------------------------------------------------- predict

struct PredictArgs {
  std::string checkpoint, input, out_dir;
  double threshold = -1.0, min_area = -1.0;
  bool no_hole_fill = false, no_invert = false;
};

bool is_raw_radiograph(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  if (ext == ".img") return true;
  std::error_code ec;
  const auto size = fs::file_size(p, ec);
  return !ec && size == uint64_t(2) * uint64_t(dataset::kNativeSize * dataset::kNativeSize);
}

// Arbitrary-resolution rasters skip the native-grid contract: resample to
// working resolution, then standardize exactly like the canonical pipeline.
dataset::ModelInput input_from_raster(const fs::path& p) {
  const pnm::GrayImage g = pnm::read_gray_pgm(p);
  Grid<float> f(g.pixels.h, g.pixels.w);
  for (size_t i = 0; i < f.data.size(); ++i) f.data[i] = float(g.pixels.data[i]);
  Grid<float> small = resize_bilinear(f, dataset::kWorkingSize, dataset::kWorkingSize);

  double sum = 0.0;
  for (float v : small.data) sum += v;
  const double mean = sum / double(small.data.size());
  double var = 0.0;
  for (float v : small.data) var += (v - mean) * (v - mean);
  var /= double(small.data.size());
  require(var > 0.0, Err::degenerate_input,
          p.stem().string() + ": constant image cannot be standardized");
  const double inv_std = 1.0 / std::sqrt(var);
  for (auto& v : small.data) v = float((v - mean) * inv_std);
  return {p.stem().string(), std::move(small), mean, std::sqrt(var)};
}

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const trainer::Checkpoint ck = trainer::load_checkpoint(a.checkpoint);
  const auto model = trainer::model_from_checkpoint(ck);
  model->set_training(false);

  const fs::path in = a.input;
  require(fs::exists(in), Err::io, "input image not found: " + in.string());
  dataset::ModelInput mi;
  if (is_raw_radiograph(in)) {
    err << "note: " << in.filename().string() << " read as a raw radiograph\n";
    mi = dataset::preprocess(dataset::load_jsrt_file(in, !a.no_invert));
  } else {
    mi = input_from_raster(in);
  }
  if (mi.case_id.empty()) mi.case_id = in.stem().string();

  const auto post = post_params(a.threshold, a.min_area, a.no_hole_fill);
  const auto pred = evalbench::predict_masks(*model, ck.config.class_names(), mi, post);

  const fs::path out_dir = a.out_dir.empty() ? fs::path(".") : fs::path(a.out_dir);
  fs::create_directories(out_dir);
  for (const auto& [name, mask] : pred.masks) {
    MaskGrid img(mask.h, mask.w);
    for (size_t i = 0; i < img.data.size(); ++i) img.data[i] = mask.data[i] ? 255 : 0;
    const fs::path path = out_dir / (mi.case_id + "_" + name + ".pgm");
    pnm::write_pgm(path, img);
    out << path.string() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------- report

struct ReportArgs {
  std::vector<std::string> runs;
  std::vector<std::string> labels;
  std::string layout = "arch_table";
  std::string out_dir = "reports";
};

evalbench::ReportLayout layout_from_string(const std::string& s) {
  if (s == "arch_table") return evalbench::ReportLayout::arch_table;
  if (s == "loss_table") return evalbench::ReportLayout::loss_table;
  if (s == "sota_table") return evalbench::ReportLayout::sota_table;
  fail(Err::config, "unknown report layout '" + s +
                        "' (want arch_table, loss_table, or sota_table)");
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  require(a.labels.empty() || a.labels.size() == a.runs.size(), Err::config,
          "--label count must match --run count");
  const auto layout = layout_from_string(a.layout);

  std::vector<evalbench::ReportRow> rows;
  for (size_t i = 0; i < a.runs.size(); ++i) {
    const fs::path run_dir = a.runs[i];
    const fs::path rec_path = run_dir / "eval" / "records.csv";
    require(fs::exists(rec_path), Err::config,
            "no evaluation records at " + rec_path.string() + "; run `cxrseg evaluate` first");
    std::ifstream rec_file(rec_path);
    std::stringstream buffer;
    buffer << rec_file.rdbuf();

    evalbench::ReportRow row;
    row.stats = evalbench::aggregate(metrics::parse_csv(buffer.str()));
    std::string arch_label = run_dir.filename().string(), loss_label = arch_label;
    const fs::path meta_path = run_dir / "eval" / "meta.json";
    if (fs::exists(meta_path)) {
      std::ifstream meta_file(meta_path);
      const json meta = json::parse(meta_file);
      arch_label = meta.value("architecture", arch_label);
      loss_label = meta.value("loss", loss_label);
      row.fine_tuned = meta.value("pretrained", false);
    }
    row.label = !a.labels.empty() ? a.labels[i]
                : layout == evalbench::ReportLayout::loss_table ? loss_label
                                                                : arch_label;
    rows.push_back(std::move(row));
  }

  const auto doc = evalbench::emit_report(
      rows, layout, [&err](const std::string& m) { err << "warning: " << m << "\n"; });
  fs::create_directories(a.out_dir);
  evalbench::write_report(a.out_dir, layout, doc);
  out << doc.markdown;
  err << "wrote " << (fs::path(a.out_dir) / evalbench::layout_name(layout)).string()
      << ".{md,csv}\n";
  return 0;
}

// ---------------------------------------------------------------------- verify

int cmd_verify(std::ostream& out) {
  bool ok = true;
  for (const auto& r : selfcheck::run_all()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  out << (ok ? "all property suites passed\n" : "property suite failure\n");
  return ok ? 0 : 2;
}

void add_post_flags(CLI::App* cmd, double& threshold, double& min_area, bool& no_hole_fill) {
  cmd->add_option("--threshold", threshold, "score threshold for binarization (default 0.25)");
  cmd->add_option("--min-area", min_area,
                  "connected-component area floor as an image fraction (default 0.005)");
  cmd->add_flag("--no-hole-fill", no_hole_fill, "keep enclosed holes instead of filling them");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::string device = env_or_empty("CXRSEG_DEVICE");
  if (!device.empty() && device != "cpu") {
    err << "error: CXRSEG_DEVICE=" << device << ": this build only supports cpu\n";
    return 1;
  }

  CLI::App app{"chest radiograph lung/heart/clavicle segmentation workbench"};
  app.set_version_flag("--version", "cxrseg 1.0.0");
  app.require_subcommand(1);
  app.footer(
      "environment:\n"
      "  CXRSEG_DATA_ROOT      default corpus root (images/, masks/, folds.csv)\n"
      "  CXRSEG_WEIGHTS        default encoder weight archive for pretrained runs\n"
      "  CXRSEG_DEVICE         compute device; only \"cpu\" is available\n"
      "  OPENBLAS_NUM_THREADS  BLAS thread count\n"
      "exit codes: 0 success, 1 validation/config error, 2 runtime failure");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "validate the radiograph/mask corpus and cache the fold manifest");
  ingest->add_option("--data", ingest_args.data, "corpus root (default: $CXRSEG_DATA_ROOT)");
  ingest->add_option("--manifest", ingest_args.manifest,
                     "fold manifest path (default: <data>/folds.csv)");
  ingest->add_option("--cases", ingest_args.cases,
                     "restrict validation to these case ids (smoke checks)");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train one architecture on both folds");
  train->add_option("--config", train_args.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("-D,--define", train_args.overrides,
                    "config override as key=value (repeatable)");
  train->add_option("--data", train_args.data, "corpus root (default: config or env)");
  train->add_option("--out", train_args.out_dir, "run directory (default: runs/<run name>)");
  train->add_option("--weights", train_args.weights,
                    "encoder weight archive (default: config or $CXRSEG_WEIGHTS)");
  train->add_option("--manifest", train_args.manifest,
                    "fold manifest path (default: <data>/folds.csv)");
  train->add_option("--limit", train_args.limit, "use only the first N cases per fold");
  train->add_option("--seed", train_args.seed, "master seed for every stochastic component");

  EvaluateArgs eval_args;
  auto* evaluate =
      app.add_subcommand("evaluate", "score both checkpoints on their held-out folds");
  evaluate->add_option("--run", eval_args.run_dir, "run directory holding fold1/ and fold2/")
      ->required()
      ->check(CLI::ExistingDirectory);
  evaluate->add_option("--data", eval_args.data, "corpus root (default: $CXRSEG_DATA_ROOT)");
  evaluate->add_option("--out", eval_args.out_dir, "output directory (default: <run>/eval)");
  evaluate->add_option("--manifest", eval_args.manifest,
                       "fold manifest path (default: <data>/folds.csv)");
  evaluate->add_option("--limit", eval_args.limit, "use only the first N cases per fold");
  evaluate->add_flag("--overlays", eval_args.overlays,
                     "write per-case color overlays next to the records");
  evaluate->add_flag("--match-truth-resolution", eval_args.match_truth,
                     "score at the ground-truth resolution instead of the model's");
  add_post_flags(evaluate, eval_args.threshold, eval_args.min_area, eval_args.no_hole_fill);

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "segment one image with a trained checkpoint");
  predict->add_option("--checkpoint", predict_args.checkpoint, "checkpoint file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--input", predict_args.input,
                      "input image: raw radiograph (.IMG or 8 MiB) or 8/16-bit PGM")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--out", predict_args.out_dir, "output directory (default: .)");
  predict->add_flag("--no-invert", predict_args.no_invert,
                    "raw radiograph gray levels are already upright");
  add_post_flags(predict, predict_args.threshold, predict_args.min_area,
                 predict_args.no_hole_fill);

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "tabulate evaluated runs as markdown and CSV");
  report->add_option("--run", report_args.runs, "evaluated run directory (repeatable)")
      ->required();
  report->add_option("--label", report_args.labels,
                     "row label per run (default: from the run's metadata)");
  report->add_option("--layout", report_args.layout,
                     "table layout: arch_table, loss_table, or sota_table");
  report->add_option("--out", report_args.out_dir, "report directory (default: reports)");

  auto* verify = app.add_subcommand(
      "verify", "run the loss-identity, gradient-check, and contour-distance property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(ingest_args, out, err);
    if (train->parsed()) return cmd_train(train_args, out, err);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, out, err);
    if (predict->parsed()) return cmd_predict(predict_args, out, err);
    if (report->parsed()) return cmd_report(report_args, out, err);
    if (verify->parsed()) return cmd_verify(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace cxr::cli
