#include <array>

#include "arch_builders.hpp"

namespace cxr::arch {

namespace {

// Residual basic block; later stages swap stride for dilation so the
// receptive field keeps growing while resolution stays at 1/8. The final
// stages drop the residual connection to smooth gridding artifacts.
class BasicBlock : public nn::Module {
 public:
  BasicBlock(int64_t cin, int64_t cout, int stride, int dil1, int dil2, bool residual, Rng& rng)
      : residual_(residual), project_(stride != 1 || cin != cout) {
    conv1_ = std::make_unique<nn::Conv2d>(cin, cout, 3, stride, dil1, rng, dil1, false);
    bn1_ = std::make_unique<nn::BatchNorm2d>(cout);
    conv2_ = std::make_unique<nn::Conv2d>(cout, cout, 3, 1, dil2, rng, dil2, false);
    bn2_ = std::make_unique<nn::BatchNorm2d>(cout);
    add_child("conv1", conv1_.get());
    add_child("bn1", bn1_.get());
    add_child("conv2", conv2_.get());
    add_child("bn2", bn2_.get());
    if (project_) {
      proj_conv_ = std::make_unique<nn::Conv2d>(cin, cout, 1, stride, 0, rng, 1, false);
      proj_bn_ = std::make_unique<nn::BatchNorm2d>(cout);
      add_child("downsample.conv", proj_conv_.get());
      add_child("downsample.bn", proj_bn_.get());
    }
  }

  nn::Var forward(const nn::Var& x) {
    nn::Var out = nn::relu(bn1_->forward(conv1_->forward(x)));
    out = bn2_->forward(conv2_->forward(out));
    if (residual_) {
      nn::Var res = project_ ? proj_bn_->forward(proj_conv_->forward(x)) : x;
      out = nn::add(out, res);
    }
    return nn::relu(out);
  }

 private:
  bool residual_, project_;
  std::unique_ptr<nn::Conv2d> conv1_, conv2_, proj_conv_;
  std::unique_ptr<nn::BatchNorm2d> bn1_, bn2_, proj_bn_;
};

struct StagePlan {
  int blocks;
  int64_t channels;
  int stride;
  int dilation;
  bool residual;
};

// Dilated residual network, 26 layers, variant C: strided downsampling
// stops at 1/8; deeper stages dilate instead, and the last two stages are
// plain (non-residual) dilated blocks that taper the dilation back down.
class DrnC26 : public SegmentationModel {
 public:
  DrnC26(ArchSpec spec, uint64_t init_seed) : SegmentationModel(std::move(spec)) {
    Rng rng(init_seed);
    stem_conv_ = std::make_unique<nn::Conv2d>(3, 16, 7, 1, 3, rng, 1, false);
    stem_bn_ = std::make_unique<nn::BatchNorm2d>(16);
    add_child("stem.conv", stem_conv_.get());
    add_child("stem.bn", stem_bn_.get());

    constexpr std::array<StagePlan, 8> plan{{
        {1, 16, 1, 1, true},
        {1, 32, 2, 1, true},
        {2, 64, 2, 1, true},
        {2, 128, 2, 1, true},
        {2, 256, 1, 2, true},
        {2, 512, 1, 4, true},
        {1, 512, 1, 2, false},
        {1, 512, 1, 1, false},
    }};
    int64_t cin = 16;
    int stage_idx = 0;
    for (const auto& st : plan) {
      ++stage_idx;
      for (int b = 0; b < st.blocks; ++b) {
        const int stride = b == 0 ? st.stride : 1;
        blocks_.push_back(std::make_unique<BasicBlock>(cin, st.channels, stride, st.dilation,
                                                       st.dilation, st.residual, rng));
        add_child("layer" + std::to_string(stage_idx) + ".block" + std::to_string(b + 1),
                  blocks_.back().get());
        cin = st.channels;
      }
    }
    head_ = std::make_unique<nn::Conv2d>(512, spec_.num_classes, 1, 1, 0, rng);
    add_child("head", head_.get());
  }

 protected:
  nn::Var forward_impl(const nn::Var& x) override {
    nn::Var h = nn::relu(stem_bn_->forward(stem_conv_->forward(x)));
    for (auto& block : blocks_) h = block->forward(h);
    return nn::sigmoid(nn::upsample_bilinear2d(head_->forward(h), 8));
  }

 private:
  std::unique_ptr<nn::Conv2d> stem_conv_, head_;
  std::unique_ptr<nn::BatchNorm2d> stem_bn_;
  std::vector<std::unique_ptr<BasicBlock>> blocks_;
};

}  // namespace

std::unique_ptr<SegmentationModel> make_drn_c26(const ArchSpec& spec, uint64_t init_seed) {
  return std::make_unique<DrnC26>(spec, init_seed);
}

}  // namespace cxr::arch
