#include <array>

#include "arch_builders.hpp"

namespace cxr::arch {

namespace {

constexpr int kGrowth = 12;
constexpr int kLayersPerBlock = 4;
constexpr double kDropRate = 0.2;
constexpr int64_t kFresh = kLayersPerBlock * kGrowth;  // new channels per block
constexpr int64_t kFirst = 48;

class DenseLayer : public nn::Module {
 public:
  DenseLayer(int64_t cin, Rng& rng, nn::RngStream* stream) {
    norm_ = std::make_unique<nn::BatchNorm2d>(cin);
    conv_ = std::make_unique<nn::Conv2d>(cin, kGrowth, 3, 1, 1, rng, 1, false);
    drop_ = std::make_unique<nn::Dropout>(kDropRate, stream);
    add_child("norm", norm_.get());
    add_child("conv", conv_.get());
    add_child("drop", drop_.get());
  }
  nn::Var forward(const nn::Var& x) {
    return drop_->forward(conv_->forward(nn::relu(norm_->forward(x))));
  }

 private:
  std::unique_ptr<nn::BatchNorm2d> norm_;
  std::unique_ptr<nn::Conv2d> conv_;
  std::unique_ptr<nn::Dropout> drop_;
};

// Each layer sees the block input plus every earlier layer's output; the
// block returns only the newly produced feature maps, concatenated.
class DenseBlock : public nn::Module {
 public:
  DenseBlock(int64_t cin, Rng& rng, nn::RngStream* stream) {
    for (int i = 0; i < kLayersPerBlock; ++i) {
      layers_.push_back(std::make_unique<DenseLayer>(cin + i * kGrowth, rng, stream));
      add_child("layer" + std::to_string(i + 1), layers_.back().get());
    }
  }
  nn::Var forward(const nn::Var& x) {
    std::vector<nn::Var> feats{x};
    std::vector<nn::Var> fresh;
    for (auto& layer : layers_) {
      nn::Var in = feats.size() == 1 ? feats[0] : nn::concat_channels(feats);
      nn::Var h = layer->forward(in);
      feats.push_back(h);
      fresh.push_back(h);
    }
    return nn::concat_channels(fresh);
  }

 private:
  std::vector<std::unique_ptr<DenseLayer>> layers_;
};

class TransitionDown : public nn::Module {
 public:
  TransitionDown(int64_t c, Rng& rng, nn::RngStream* stream) {
    norm_ = std::make_unique<nn::BatchNorm2d>(c);
    conv_ = std::make_unique<nn::Conv2d>(c, c, 1, 1, 0, rng, 1, false);
    drop_ = std::make_unique<nn::Dropout>(kDropRate, stream);
    add_child("norm", norm_.get());
    add_child("conv", conv_.get());
    add_child("drop", drop_.get());
  }
  nn::Var forward(const nn::Var& x) {
    return nn::maxpool2d(drop_->forward(conv_->forward(nn::relu(norm_->forward(x)))), 2, 2);
  }

 private:
  std::unique_ptr<nn::BatchNorm2d> norm_;
  std::unique_ptr<nn::Conv2d> conv_;
  std::unique_ptr<nn::Dropout> drop_;
};

// 56-layer fully convolutional DenseNet: five dense blocks down, a
// bottleneck block, five up. Transitions up deconvolve only the fresh
// feature maps; skips reattach the full-resolution stacks.
class FcDenseNet56 : public SegmentationModel {
 public:
  FcDenseNet56(ArchSpec spec, uint64_t init_seed) : SegmentationModel(std::move(spec)) {
    Rng rng(init_seed);
    first_ = std::make_unique<nn::Conv2d>(3, kFirst, 3, 1, 1, rng, 1, false);
    add_child("first", first_.get());
    int64_t c = kFirst;
    for (int i = 0; i < kDepth; ++i) {
      down_[i] = std::make_unique<DenseBlock>(c, rng, &stream_);
      add_child("down" + std::to_string(i + 1), down_[i].get());
      c += kFresh;  // 96, 144, 192, 240, 288
      skip_channels_[i] = c;
      td_[i] = std::make_unique<TransitionDown>(c, rng, &stream_);
      add_child("td" + std::to_string(i + 1), td_[i].get());
    }
    bottleneck_ = std::make_unique<DenseBlock>(c, rng, &stream_);
    add_child("bottleneck", bottleneck_.get());
    for (int i = 0; i < kDepth; ++i) {
      tu_[i] = std::make_unique<nn::ConvTranspose2d>(kFresh, kFresh, 3, 2, 1, rng, 1);
      add_child("tu" + std::to_string(i + 1), tu_[i].get());
      up_[i] = std::make_unique<DenseBlock>(kFresh + skip_channels_[kDepth - 1 - i], rng, &stream_);
      add_child("up" + std::to_string(i + 1), up_[i].get());
    }
    head_ = std::make_unique<nn::Conv2d>(skip_channels_[0] + 2 * kFresh, spec_.num_classes, 1, 1, 0,
                                         rng);
    add_child("head", head_.get());
  }

 protected:
  nn::Var forward_impl(const nn::Var& x) override {
    nn::Var h = first_->forward(x);
    std::array<nn::Var, kDepth> skips;
    for (int i = 0; i < kDepth; ++i) {
      nn::Var fresh = down_[i]->forward(h);
      h = nn::concat_channels({h, fresh});
      skips[i] = h;
      h = td_[i]->forward(h);
    }
    h = bottleneck_->forward(h);
    for (int i = 0; i < kDepth; ++i) {
      nn::Var in = nn::concat_channels({tu_[i]->forward(h), skips[kDepth - 1 - i]});
      nn::Var fresh = up_[i]->forward(in);
      h = (i + 1 == kDepth) ? nn::concat_channels({in, fresh}) : fresh;
    }
    return nn::sigmoid(head_->forward(h));
  }

 private:
  static constexpr int kDepth = 5;
  std::unique_ptr<nn::Conv2d> first_, head_;
  std::array<std::unique_ptr<DenseBlock>, kDepth> down_, up_;
  std::unique_ptr<DenseBlock> bottleneck_;
  std::array<std::unique_ptr<TransitionDown>, kDepth> td_;
  std::array<std::unique_ptr<nn::ConvTranspose2d>, kDepth> tu_;
  std::array<int64_t, kDepth> skip_channels_{};
};

}  // namespace

std::unique_ptr<SegmentationModel> make_fc_densenet(const ArchSpec& spec, uint64_t init_seed) {
  return std::make_unique<FcDenseNet56>(spec, init_seed);
}

}  // namespace cxr::arch
