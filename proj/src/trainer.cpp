#include "cxr/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>

#include "cxr/nn/adam.hpp"
#include "json.hpp"

namespace cxr::trainer {

namespace {

using json = nlohmann::json;

// Independent sub-stream tags off the master seed.
constexpr uint64_t kInitTag = 0x11;
constexpr uint64_t kDropoutTag = 0x22;
constexpr uint64_t kShuffleTag = 0x33;
constexpr uint64_t kAugmentTag = 0x44;

int structure_index(const std::string& name) {
  for (size_t i = 0; i < dataset::kStructures.size(); ++i)
    if (name == dataset::kStructures[i]) return static_cast<int>(i);
  return -1;
}

// Fisher-Yates with our own generator; std::shuffle's draw sequence is
// implementation-defined, which would break cross-toolchain reruns.
void deterministic_shuffle(std::vector<int64_t>& v, uint64_t seed) {
  Rng rng(seed);
  for (int64_t i = static_cast<int64_t>(v.size()) - 1; i > 0; --i)
    std::swap(v[size_t(i)], v[size_t(rng.next() % uint64_t(i + 1))]);
}

bool jitter_enabled(const dataset::AugmentParams& p) {
  return p.scale > 0.0 || p.translate > 0.0 || p.rotate_deg > 0.0;
}

// Target tensor in the run's class order: all three structures in multi
// mode, just the chosen one in single mode.
Tensor target_tensor(const dataset::MaskSet& m, const TrainConfig& cfg) {
  if (cfg.class_mode == ClassMode::multi) return dataset::masks_to_chw(m);
  const auto& mask = m.at(cfg.structure);
  Tensor t({1, mask.h, mask.w});
  for (int64_t i = 0; i < mask.numel(); ++i) t[i] = mask.data[size_t(i)] ? 1.0f : 0.0f;
  return t;
}

void check_sample(const TrainSample& s, const TrainConfig& cfg, int64_t hw) {
  require(s.input.grid.h == s.masks.h && s.input.grid.w == s.masks.w, Err::contract,
          s.input.case_id + ": image and masks disagree on resolution");
  require(s.input.grid.h == hw && s.input.grid.w == hw, Err::contract,
          s.input.case_id + ": every sample must share one square resolution");
  if (cfg.class_mode == ClassMode::multi) {
    for (const char* name : dataset::kStructures)
      require(s.masks.masks.count(name) != 0, Err::incomplete_ground_truth,
              s.input.case_id + ": missing mask for " + name);
  } else {
    require(s.masks.masks.count(cfg.structure) != 0, Err::incomplete_ground_truth,
            s.input.case_id + ": missing mask for " + cfg.structure);
  }
}

void harvest_weights(arch::SegmentationModel& model, archive::TensorMap& out) {
  out.tensors.clear();
  for (const auto& [name, p] : model.named_parameters()) out.tensors[name] = p->value;
  for (auto& [name, t] : model.named_buffers()) out.tensors[name] = *t;
}

const char* mode_name(ClassMode m) { return m == ClassMode::multi ? "multi" : "single"; }

json history_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::vector<std::string> TrainConfig::class_names() const {
  if (class_mode == ClassMode::single) return {structure};
  return {dataset::kStructures.begin(), dataset::kStructures.end()};
}

void TrainConfig::validate() const {
  arch.validate();
  loss.validate();
  augment.validate();
  require(std::isfinite(lr) && lr > 0.0, Err::config, "learning rate must be > 0");
  require(epochs >= 1, Err::config, "epochs must be at least 1");
  require(batch_size >= 1, Err::config, "batch size must be at least 1");
  require(train_fold == 1 || train_fold == 2, Err::config, "train fold must be 1 or 2");
  if (class_mode == ClassMode::single) {
    require(structure_index(structure) >= 0, Err::config,
            "single-class mode needs a known structure, got '" + structure + "'");
    require(arch.num_classes == 1, Err::config, "single-class mode trains one output channel");
  } else {
    require(arch.num_classes == static_cast<int64_t>(dataset::kStructures.size()), Err::config,
            "multi-class mode trains one channel per structure");
  }
}

std::string config_to_json(const TrainConfig& c) {
  json j;
  j["arch"] = {{"name", arch::arch_name(c.arch.name)},
               {"pretrained_encoder", c.arch.pretrained_encoder},
               {"num_classes", c.arch.num_classes}};
  j["loss"] = {{"kind", losses::kind_name(c.loss.kind)},
               {"alpha", c.loss.alpha},
               {"beta", c.loss.beta},
               {"epsilon", c.loss.epsilon}};
  j["class_mode"] = mode_name(c.class_mode);
  j["structure"] = c.structure;
  j["lr"] = c.lr;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["augment"] = {{"scale", c.augment.scale},
                  {"translate", c.augment.translate},
                  {"rotate_deg", c.augment.rotate_deg}};
  j["train_fold"] = c.train_fold;
  return j.dump();
}

TrainConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::malformed_file, std::string("bad config json: ") + e.what());
  }
  TrainConfig c;
  try {
    c.arch.name = arch::arch_from_string(j.at("arch").at("name").get<std::string>());
    c.arch.pretrained_encoder = j.at("arch").at("pretrained_encoder").get<bool>();
    c.arch.num_classes = j.at("arch").at("num_classes").get<int64_t>();
    c.loss.kind = losses::kind_from_string(j.at("loss").at("kind").get<std::string>());
    c.loss.alpha = j.at("loss").at("alpha").get<double>();
    c.loss.beta = j.at("loss").at("beta").get<double>();
    c.loss.epsilon = j.at("loss").at("epsilon").get<double>();
    const auto mode = j.at("class_mode").get<std::string>();
    require(mode == "multi" || mode == "single", Err::malformed_file,
            "unknown class mode: " + mode);
    c.class_mode = mode == "multi" ? ClassMode::multi : ClassMode::single;
    c.structure = j.at("structure").get<std::string>();
    c.lr = j.at("lr").get<double>();
    c.epochs = j.at("epochs").get<int64_t>();
    c.batch_size = j.at("batch_size").get<int64_t>();
    c.seed = j.at("seed").get<uint64_t>();
    c.augment.scale = j.at("augment").at("scale").get<double>();
    c.augment.translate = j.at("augment").at("translate").get<double>();
    c.augment.rotate_deg = j.at("augment").at("rotate_deg").get<double>();
    c.train_fold = j.at("train_fold").get<int>();
  } catch (const json::exception& e) {
    fail(Err::malformed_file, std::string("bad config json: ") + e.what());
  }
  c.validate();
  return c;
}

Checkpoint train(const TrainConfig& config, const std::vector<TrainSample>& data,
                 const TrainHooks& hooks, const archive::TensorMap* pretrained) {
  config.validate();
  require(!data.empty(), Err::config, "no training samples");
  for (const auto& s : data) check_sample(s, config, data[0].input.grid.h);

  const uint64_t fold = uint64_t(config.train_fold);
  auto model = arch::build_model(config.arch, derive_seed(config.seed, kInitTag, fold));
  if (config.arch.pretrained_encoder) {
    require(pretrained != nullptr, Err::config,
            "config asks for a pretrained encoder but no weight archive was provided");
    model->load_pretrained(*pretrained);
  }
  model->set_training(true);
  model->rng_stream().reset(derive_seed(config.seed, kDropoutTag, fold));
  nn::Adam opt(model->parameters(), config.lr);

  const int64_t n = static_cast<int64_t>(data.size());
  const int64_t hw = data[0].input.grid.h;
  const int64_t classes = config.arch.num_classes;
  const bool jitter = jitter_enabled(config.augment);

  Checkpoint ckpt;
  ckpt.config = config;
  for (const auto& s : data) ckpt.train_cases.push_back(s.input.case_id);

  std::vector<int64_t> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    deterministic_shuffle(order, derive_seed(derive_seed(config.seed, kShuffleTag, fold),
                                             uint64_t(epoch)));
    double loss_sum = 0.0;
    for (int64_t first = 0, step = 1; first < n; first += config.batch_size, ++step) {
      const int64_t b = std::min(config.batch_size, n - first);
      Tensor x({b, 3, hw, hw});
      Tensor g({b, classes, hw, hw});
      for (int64_t j = 0; j < b; ++j) {
        const TrainSample& s = data[size_t(order[size_t(first + j)])];
        dataset::ModelInput input = s.input;
        dataset::MaskSet masks = s.masks;
        if (jitter) {
          dataset::AugmentParams p = config.augment;
          p.seed = derive_seed(derive_seed(config.seed, kAugmentTag, fold), uint64_t(epoch),
                               uint64_t(first + j));
          std::tie(input, masks) = dataset::augment(input, masks, p);
        }
        const Tensor xi = input.to_chw();
        const Tensor gi = target_tensor(masks, config);
        std::copy(xi.data(), xi.data() + xi.numel(), x.data() + j * xi.numel());
        std::copy(gi.data(), gi.data() + gi.numel(), g.data() + j * gi.numel());
      }
      nn::Var loss;
      const nn::Var scores = model->forward(nn::constant(std::move(x)));
      try {
        loss = losses::batch_loss(scores, g, config.loss);
      } catch (const Error& e) {
        if (e.code() != Err::non_finite_loss) throw;
        fail(Err::non_finite_loss, "epoch " + std::to_string(epoch) + ", batch " +
                                       std::to_string(step) + ": " + e.what());
      }
      if (hooks.on_step) hooks.on_step({epoch, step, scores->value, g, double(loss->value[0])});
      opt.zero_grad();
      nn::backward(loss);
      opt.step();
      loss_sum += double(loss->value[0]) * double(b);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ckpt.loss_history.push_back(loss_sum / double(n));
    ckpt.epoch_seconds.push_back(secs);
    ckpt.epochs_completed = epoch;
    if (hooks.on_epoch) hooks.on_epoch({epoch, ckpt.loss_history.back(), secs});
  }

  harvest_weights(*model, ckpt.parameters);
  return ckpt;
}

std::pair<Checkpoint, Checkpoint> train_two_fold(const TrainConfig& config,
                                                 const std::vector<TrainSample>& all,
                                                 const dataset::FoldSplit& split,
                                                 const TrainHooks& hooks,
                                                 const archive::TensorMap* pretrained) {
  std::set<std::string> fold1(split.fold1.begin(), split.fold1.end());
  std::set<std::string> fold2(split.fold2.begin(), split.fold2.end());
  for (const auto& id : fold1)
    require(fold2.count(id) == 0, Err::fold_leakage, id + " appears in both folds");

  std::vector<TrainSample> train1, train2;
  for (const auto& s : all) {
    const std::string& id = s.input.case_id;
    if (fold1.count(id)) {
      train1.push_back(s);
    } else if (fold2.count(id)) {
      train2.push_back(s);
    } else {
      fail(Err::fold_leakage, id + " belongs to neither fold");
    }
  }
  require(train1.size() == fold1.size() && train2.size() == fold2.size(), Err::fold_leakage,
          "fold membership lists cases with no sample");

  TrainConfig c1 = config;
  c1.train_fold = 1;
  TrainConfig c2 = config;
  c2.train_fold = 2;
  return {train(c1, train1, hooks, pretrained), train(c2, train2, hooks, pretrained)};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  require(ckpt.epochs_completed == static_cast<int64_t>(ckpt.loss_history.size()), Err::contract,
          "loss history length must match completed epochs");
  json meta;
  meta["kind"] = "checkpoint";
  meta["config"] = json::parse(config_to_json(ckpt.config));
  meta["epochs_completed"] = ckpt.epochs_completed;
  meta["loss_history"] = history_json(ckpt.loss_history);
  meta["epoch_seconds"] = history_json(ckpt.epoch_seconds);
  meta["train_cases"] = ckpt.train_cases;
  archive::TensorMap out;
  out.tensors = ckpt.parameters.tensors;
  out.meta_json = meta.dump();
  archive::save(path, out);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  archive::TensorMap m = archive::load(path);
  Checkpoint ckpt;
  try {
    const json meta = json::parse(m.meta_json);
    require(meta.at("kind").get<std::string>() == "checkpoint", Err::malformed_file,
            path.string() + " is not a checkpoint archive");
    ckpt.config = config_from_json(meta.at("config").dump());
    ckpt.epochs_completed = meta.at("epochs_completed").get<int64_t>();
    ckpt.loss_history = meta.at("loss_history").get<std::vector<double>>();
    ckpt.epoch_seconds = meta.at("epoch_seconds").get<std::vector<double>>();
    ckpt.train_cases = meta.at("train_cases").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(Err::malformed_file, path.string() + ": bad checkpoint metadata: " + e.what());
  }
  require(ckpt.epochs_completed == static_cast<int64_t>(ckpt.loss_history.size()),
          Err::malformed_file, path.string() + ": loss history does not match epoch count");
  ckpt.parameters.tensors = std::move(m.tensors);
  return ckpt;
}

std::unique_ptr<arch::SegmentationModel> model_from_checkpoint(const Checkpoint& ckpt) {
  auto model = arch::build_model(ckpt.config.arch, 0);
  size_t used = 0;
  for (const auto& [name, p] : model->named_parameters()) {
    const auto it = ckpt.parameters.tensors.find(name);
    require(it != ckpt.parameters.tensors.end(), Err::weight_load,
            "checkpoint is missing tensor " + name);
    require(p->value.same_shape(it->second), Err::weight_load,
            name + ": checkpoint shape " + it->second.shape_str() + " does not match " +
                p->value.shape_str());
    std::copy(it->second.data(), it->second.data() + it->second.numel(), p->value.data());
    ++used;
  }
  for (auto& [name, t] : model->named_buffers()) {
    const auto it = ckpt.parameters.tensors.find(name);
    require(it != ckpt.parameters.tensors.end(), Err::weight_load,
            "checkpoint is missing buffer " + name);
    require(t->same_shape(it->second), Err::weight_load, name + ": buffer shape mismatch");
    std::copy(it->second.data(), it->second.data() + it->second.numel(), t->data());
    ++used;
  }
  require(used == ckpt.parameters.tensors.size(), Err::weight_load,
          "checkpoint carries tensors the architecture does not own");
  return model;
}

void write_train_log(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path);
  require(out.good(), Err::io, "cannot write " + path.string());
  out << "epoch,mean_loss,seconds\n";
  char line[128];
  for (size_t i = 0; i < ckpt.loss_history.size(); ++i) {
    const double secs = i < ckpt.epoch_seconds.size() ? ckpt.epoch_seconds[i] : 0.0;
    std::snprintf(line, sizeof line, "%zu,%.10g,%.3f\n", i + 1, ckpt.loss_history[i], secs);
    out << line;
  }
  require(out.good(), Err::io, "failed while writing " + path.string());
}

}  // namespace cxr::trainer
