#include "arch_builders.hpp"
#include "arch_vgg16.hpp"

namespace cxr::arch {

namespace {

// VGG-16 backbone with the two fully-connected layers converted to
// convolutions, scored at stride 32 and fused with pool4/pool3 predictions
// on the way back up. Upsampling is fixed bilinear interpolation.
class Fcn8s : public SegmentationModel {
 public:
  Fcn8s(ArchSpec spec, uint64_t init_seed) : SegmentationModel(std::move(spec)) {
    Rng rng(init_seed);
    encoder_ = std::make_unique<Vgg16Encoder>(rng);
    fc6_ = std::make_unique<nn::Conv2d>(512, 4096, 7, 1, 3, rng);
    fc7_ = std::make_unique<nn::Conv2d>(4096, 4096, 1, 1, 0, rng);
    drop6_ = std::make_unique<nn::Dropout>(0.5, &stream_);
    drop7_ = std::make_unique<nn::Dropout>(0.5, &stream_);
    score_fr_ = std::make_unique<nn::Conv2d>(4096, spec_.num_classes, 1, 1, 0, rng);
    score_pool4_ = std::make_unique<nn::Conv2d>(512, spec_.num_classes, 1, 1, 0, rng);
    score_pool3_ = std::make_unique<nn::Conv2d>(256, spec_.num_classes, 1, 1, 0, rng);
    add_child("encoder", encoder_.get());
    add_child("fc6", fc6_.get());
    add_child("fc7", fc7_.get());
    add_child("drop6", drop6_.get());
    add_child("drop7", drop7_.get());
    add_child("score_fr", score_fr_.get());
    add_child("score_pool4", score_pool4_.get());
    add_child("score_pool3", score_pool3_.get());
  }

  void load_pretrained(const archive::TensorMap& weights) override {
    encoder_->load(weights);
    // Converted classifier layers load too when the archive carries them.
    const auto maybe_copy = [&](const char* base, nn::Conv2d& layer) {
      const auto wi = weights.tensors.find(std::string(base) + ".weight");
      const auto bi = weights.tensors.find(std::string(base) + ".bias");
      if (wi == weights.tensors.end() || bi == weights.tensors.end()) return;
      copy_into_param(layer.weight, wi->second, std::string(base) + ".weight");
      copy_into_param(layer.bias, bi->second, std::string(base) + ".bias");
    };
    maybe_copy("fc6", *fc6_);
    maybe_copy("fc7", *fc7_);
  }

 protected:
  nn::Var forward_impl(const nn::Var& x) override {
    const auto f = encoder_->forward(x);
    nn::Var h = drop6_->forward(nn::relu(fc6_->forward(f.pool[4])));
    h = drop7_->forward(nn::relu(fc7_->forward(h)));
    nn::Var score = score_fr_->forward(h);  // stride 32

    score = nn::upsample_bilinear2d(score, 2);  // stride 16
    score = nn::add(score, score_pool4_->forward(f.pool[3]));

    score = nn::upsample_bilinear2d(score, 2);  // stride 8
    score = nn::add(score, score_pool3_->forward(f.pool[2]));

    return nn::sigmoid(nn::upsample_bilinear2d(score, 8));
  }

 private:
  std::unique_ptr<Vgg16Encoder> encoder_;
  std::unique_ptr<nn::Conv2d> fc6_, fc7_, score_fr_, score_pool4_, score_pool3_;
  std::unique_ptr<nn::Dropout> drop6_, drop7_;
};

}  // namespace

std::unique_ptr<SegmentationModel> make_fcn8s(const ArchSpec& spec, uint64_t init_seed) {
  return std::make_unique<Fcn8s>(spec, init_seed);
}

}  // namespace cxr::arch
