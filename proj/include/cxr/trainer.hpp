#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cxr/arch/model.hpp"
#include "cxr/dataset.hpp"
#include "cxr/losses.hpp"

namespace cxr::trainer {

enum class ClassMode { multi, single };

struct TrainConfig {
  arch::ArchSpec arch;
  losses::LossSpec loss;
  ClassMode class_mode = ClassMode::multi;
  std::string structure;  // target structure in single-class mode
  double lr = 1e-5;
  int64_t epochs = 100;
  int64_t batch_size = 4;
  uint64_t seed = 0;
  dataset::AugmentParams augment;  // zero magnitudes disable jitter
  int train_fold = 1;

  // Channel names of the score maps this run produces, in channel order.
  std::vector<std::string> class_names() const;
  void validate() const;
};

std::string config_to_json(const TrainConfig& c);
TrainConfig config_from_json(const std::string& text);

// One training case at working resolution; images and masks are augmented
// together on the fly.
struct TrainSample {
  dataset::ModelInput input;
  dataset::MaskSet masks;
};

struct Checkpoint {
  TrainConfig config;
  int64_t epochs_completed = 0;
  std::vector<double> loss_history;   // per-epoch mean training loss
  std::vector<double> epoch_seconds;  // wall time per epoch
  std::vector<std::string> train_cases;
  archive::TensorMap parameters;  // model parameters and buffers by name
};

struct EpochLog {
  int64_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double seconds = 0.0;
};

// Inspection point for one optimization step, before backprop.
struct StepInspection {
  int64_t epoch = 0;
  int64_t step = 0;  // 1-based within the epoch
  const Tensor& scores;
  const Tensor& targets;
  double loss = 0.0;
};

struct TrainHooks {
  std::function<void(const EpochLog&)> on_epoch;
  std::function<void(const StepInspection&)> on_step;
};

// Runs epochs x ceil(N/batch) Adam steps (beta1 0.9, beta2 0.999) at a
// constant learning rate. Everything stochastic — initialization, batch
// order, augmentation jitter, dropout — derives from config.seed, so a rerun
// reproduces the loss history bit for bit. A non-finite loss aborts with the
// epoch and batch in the message. Configs with a pretrained encoder must be
// given the weight archive to copy in before the first step.
Checkpoint train(const TrainConfig& config, const std::vector<TrainSample>& data,
                 const TrainHooks& hooks = {}, const archive::TensorMap* pretrained = nullptr);

// Trains one checkpoint per fold (the held-out fold is the other one).
// Rejects folds that overlap or fail to cover every provided sample.
std::pair<Checkpoint, Checkpoint> train_two_fold(const TrainConfig& config,
                                                 const std::vector<TrainSample>& all,
                                                 const dataset::FoldSplit& split,
                                                 const TrainHooks& hooks = {},
                                                 const archive::TensorMap* pretrained = nullptr);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Fresh model with the checkpoint's weights and buffers copied in.
std::unique_ptr<arch::SegmentationModel> model_from_checkpoint(const Checkpoint& ckpt);

// CSV: epoch, mean training loss, seconds.
void write_train_log(const std::filesystem::path& path, const Checkpoint& ckpt);

}  // namespace cxr::trainer
