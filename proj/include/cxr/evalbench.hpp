#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cxr/core/pnm.hpp"
#include "cxr/dataset.hpp"
#include "cxr/metrics.hpp"
#include "cxr/postproc.hpp"
#include "cxr/trainer.hpp"

namespace cxr::evalbench {

// Sink for non-fatal evaluation notices (skipped cases, partial reports).
using WarnFn = std::function<void(const std::string&)>;

struct EvalOptions {
  postproc::PostprocParams post;
  // Non-canonical sensitivity mode: resample predictions (nearest) up to the
  // ground-truth resolution and score there instead of requiring the truth
  // to sit at the model's working resolution.
  bool match_truth_resolution = false;
  WarnFn warn;
};

// Per-structure summary over every scored case, pooled across folds.
struct StructureStats {
  std::string structure;
  int64_t n_cases = 0;  // records contributing dice/jaccard
  double dice_mean = 0.0, dice_std = 0.0;
  double jaccard_mean = 0.0, jaccard_std = 0.0;
  int64_t n_macd = 0;            // records with a defined contour distance
  int64_t n_macd_undefined = 0;  // records excluded from the macd average
  double macd_mean = 0.0, macd_std = 0.0;
};

struct AggregateReport {
  std::vector<StructureStats> structures;  // canonical structure order first
  int64_t n_records = 0;

  const StructureStats& at(const std::string& structure) const;
  bool has(const std::string& structure) const;
};

// Scores one case's predicted masks against ground truth at a shared
// resolution. Structures absent from the truth are skipped through warn;
// structures absent from pred are a caller bug. An empty prediction against
// a non-empty truth scores zero overlap with the distance left undefined;
// two empty masks count as a perfect (if vacuous) match.
std::vector<metrics::MetricsRecord> score_case(const dataset::MaskSet& pred,
                                               const dataset::MaskSet& truth,
                                               const std::vector<std::string>& structures,
                                               double mm_per_pixel, const WarnFn& warn = {});

// Thresholded, cleaned masks for one preprocessed input under an eval-mode
// model: one mask per class name, at the model's output resolution.
dataset::MaskSet predict_masks(arch::SegmentationModel& model,
                               const std::vector<std::string>& class_names,
                               const dataset::ModelInput& input,
                               const postproc::PostprocParams& post);

// Runs the checkpoint's model over every sample of the held-out fold:
// forward pass, score thresholding and cleanup, then per-structure overlap
// and contour-distance records. Millimetre scaling follows the scoring
// resolution relative to the native acquisition grid. Evaluating the fold a
// checkpoint was trained on (or any sample whose case id appears in its
// training roster) is rejected as an integrity violation.
std::vector<metrics::MetricsRecord> evaluate(const trainer::Checkpoint& ckpt, int test_fold,
                                             const std::vector<trainer::TrainSample>& samples,
                                             const EvalOptions& opts = {});

// Pools records from both folds into per-structure mean and population
// standard deviation (n divisor). Undefined contour distances are excluded
// from the distance average and counted. Bit-identical under any record
// permutation. An empty record list is an error.
AggregateReport aggregate(const std::vector<metrics::MetricsRecord>& records);

// Color overlay for one structure: grayscale backdrop (min/max stretched),
// truth-only pixels blue, prediction-only red, agreement green, and a banner
// above the frame printing the structure initial with the Jaccard index.
// The base image and both masks must share one resolution. Banner height is
// overlay.h minus the mask height.
pnm::RgbImage render_overlay(const Grid<float>& base, const dataset::MaskSet& gt,
                             const dataset::MaskSet& pred, const std::string& structure);

// <dir>/<case_id>_<structure>.ppm
std::filesystem::path overlay_path(const std::filesystem::path& dir, const std::string& case_id,
                                   const std::string& structure);

enum class ReportLayout { arch_table, loss_table, sota_table };

const char* layout_name(ReportLayout layout);

// One table row: a labeled run and its pooled statistics.
struct ReportRow {
  std::string label;
  bool fine_tuned = false;  // architecture rows: pretrained-encoder marker
  AggregateReport stats;
};

struct ReportDocument {
  std::string markdown;
  std::string csv;
};

// Renders the requested comparison table as markdown and CSV. arch_table and
// loss_table carry nine metric columns (three structures x dice, jaccard,
// distance); sota_table interleaves the static published reference rows with
// the supplied runs, one section per structure. Expected rows that are
// missing produce a partial-report warning, never an error. Identical input
// yields byte-identical documents.
ReportDocument emit_report(const std::vector<ReportRow>& rows, ReportLayout layout,
                           const WarnFn& warn = {});

// Writes <dir>/<layout>.md and <dir>/<layout>.csv.
void write_report(const std::filesystem::path& dir, ReportLayout layout,
                  const ReportDocument& doc);

// ---------------------------------------------------------------------------
// Published benchmark numbers, quoted as static reference data with their
// sources; never recomputed by this code.

struct ReferenceMetrics {
  double dice = 0.0, jaccard = 0.0, macd_mm = 0.0;
};

// Multi-class runs of the four architectures (dice-overlap objective),
// means per structure.
struct ArchReferenceRow {
  const char* architecture;
  bool fine_tuned;  // encoder started from ImageNet-trained weights
  ReferenceMetrics lungs, heart, clavicles;
};
std::span<const ArchReferenceRow> arch_reference_rows();

// Flagship architecture trained under the four objective functions.
struct LossReferenceRow {
  const char* loss;
  ReferenceMetrics lungs, heart, clavicles;
};
std::span<const LossReferenceRow> loss_reference_rows();

// Benchmark leaderboard rows: per-structure dice/jaccard/distance with the
// reported spread where the source gives one. Missing entries were not
// reported by the source.
struct PublishedScore {
  std::optional<double> mean;
  std::optional<double> spread;  // reported +/- value
};
struct SotaReferenceRow {
  const char* method;
  const char* source;  // author-year note; (*) marks a non-benchmark split
  const char* structure;
  PublishedScore dice, jaccard, macd_mm;
};
std::span<const SotaReferenceRow> sota_reference_rows();

// Contour-distance means (mm) for lungs/heart/clavicles after mask cleanup
// was added to the flagship run (quoted from the published run's summary,
// which rounds the clavicle figure differently from its leaderboard table).
std::array<double, 3> postprocessed_macd_reference_mm();

}  // namespace cxr::evalbench
