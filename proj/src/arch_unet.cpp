#include "arch_builders.hpp"
#include "arch_vgg16.hpp"

namespace cxr::arch {

namespace {

// One decoder stage: 2x transposed-conv upsampling, concatenation with the
// same-scale encoder activation, then two 3x3 conv+relu blocks.
class UnetDecoderStage : public nn::Module {
 public:
  UnetDecoderStage(int64_t cin, int64_t skip, int64_t cout, Rng& rng) {
    up_ = std::make_unique<nn::ConvTranspose2d>(cin, cout, 2, 2, 0, rng);
    conv1_ = std::make_unique<nn::Conv2d>(cout + skip, cout, 3, 1, 1, rng);
    conv2_ = std::make_unique<nn::Conv2d>(cout, cout, 3, 1, 1, rng);
    add_child("up", up_.get());
    add_child("conv1", conv1_.get());
    add_child("conv2", conv2_.get());
  }

  nn::Var forward(const nn::Var& x, const nn::Var& skip) {
    nn::Var h = nn::concat_channels({up_->forward(x), skip});
    h = nn::relu(conv1_->forward(h));
    return nn::relu(conv2_->forward(h));
  }

 private:
  std::unique_ptr<nn::ConvTranspose2d> up_;
  std::unique_ptr<nn::Conv2d> conv1_, conv2_;
};

class UnetVgg16 : public SegmentationModel {
 public:
  UnetVgg16(ArchSpec spec, uint64_t init_seed) : SegmentationModel(std::move(spec)) {
    Rng rng(init_seed);
    encoder_ = std::make_unique<Vgg16Encoder>(rng);
    add_child("encoder", encoder_.get());
    // Decoder widths mirror the encoder stages in reverse.
    static constexpr int64_t kSkip[5] = {512, 512, 256, 128, 64};
    static constexpr int64_t kOut[5] = {512, 512, 256, 128, 64};
    int64_t cin = 512;  // bottleneck channels (pooled stage 5)
    for (int i = 0; i < 5; ++i) {
      stages_.push_back(std::make_unique<UnetDecoderStage>(cin, kSkip[i], kOut[i], rng));
      add_child("dec" + std::to_string(5 - i), stages_.back().get());
      cin = kOut[i];
    }
    head_ = std::make_unique<nn::Conv2d>(64, spec_.num_classes, 1, 1, 0, rng);
    add_child("head", head_.get());
  }

  void load_pretrained(const archive::TensorMap& weights) override {
    encoder_->load(weights);
  }

 protected:
  nn::Var forward_impl(const nn::Var& x) override {
    const auto f = encoder_->forward(x);
    nn::Var h = f.pool[4];  // 512 channels at 1/32 scale
    for (int i = 0; i < 5; ++i) h = stages_[size_t(i)]->forward(h, f.relu[size_t(4 - i)]);
    return nn::sigmoid(head_->forward(h));
  }

 private:
  std::unique_ptr<Vgg16Encoder> encoder_;
  std::vector<std::unique_ptr<UnetDecoderStage>> stages_;
  std::unique_ptr<nn::Conv2d> head_;
};

}  // namespace

std::unique_ptr<SegmentationModel> make_unet_vgg16(const ArchSpec& spec, uint64_t init_seed) {
  return std::make_unique<UnetVgg16>(spec, init_seed);
}

}  // namespace cxr::arch
