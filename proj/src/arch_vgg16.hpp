#pragma once

#include <array>
#include <memory>
#include <vector>

#include "cxr/arch/model.hpp"

namespace cxr::arch {

struct VggLayerSpec {
  const char* name;
  int64_t cin, cout;
};

// The thirteen 3x3 convolutions of VGG-16, in forward order; stages end
// after indices 1, 3, 6, 9, 12.
inline constexpr std::array<VggLayerSpec, 13> kVggLayers = {{
    {"conv1_1", 3, 64},
    {"conv1_2", 64, 64},
    {"conv2_1", 64, 128},
    {"conv2_2", 128, 128},
    {"conv3_1", 128, 256},
    {"conv3_2", 256, 256},
    {"conv3_3", 256, 256},
    {"conv4_1", 256, 512},
    {"conv4_2", 512, 512},
    {"conv4_3", 512, 512},
    {"conv5_1", 512, 512},
    {"conv5_2", 512, 512},
    {"conv5_3", 512, 512},
}};

// VGG-16 convolutional stack (no batch norm, matching the original weights).
// Exposes each stage's pre-pool activation for U-Net skips and the pooled
// stage outputs for FCN fusions.
class Vgg16Encoder : public nn::Module {
 public:
  explicit Vgg16Encoder(Rng& rng);

  struct Features {
    // relu[k] = stage k+1 output before pooling; pool[k] = after pooling.
    std::array<nn::Var, 5> relu;
    std::array<nn::Var, 5> pool;
  };
  Features forward(const nn::Var& x);

  // Bit-copies conv1_1..conv5_3 weights/biases from the archive.
  void load(const archive::TensorMap& weights);

 private:
  std::vector<std::unique_ptr<nn::Conv2d>> convs_;
};

// Copies `src` into a parameter tensor, requiring an exact shape match.
void copy_into_param(const nn::Var& param, const Tensor& src, const std::string& what);

}  // namespace cxr::arch
