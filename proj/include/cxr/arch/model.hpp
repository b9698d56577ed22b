#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "cxr/core/archive.hpp"
#include "cxr/nn/module.hpp"

namespace cxr::arch {

enum class ArchName { fcn8s, unet_vgg16, fc_densenet, drn_c26 };

ArchName arch_from_string(const std::string& s);
const char* arch_name(ArchName a);

struct ArchSpec {
  ArchName name = ArchName::unet_vgg16;
  bool pretrained_encoder = false;
  int64_t num_classes = 3;

  // Pretrained encoders exist only for the two VGG-backed networks.
  void validate() const;
};

// Common forward contract: (N, 3, H, W) in, (N, num_classes, H, W) out,
// every output through a terminal sigmoid, classes uncoupled (multi-label).
class SegmentationModel : public nn::Module {
 public:
  explicit SegmentationModel(ArchSpec spec);

  nn::Var forward(const nn::Var& x);
  const ArchSpec& spec() const { return spec_; }

  // Deterministic seed stream feeding stochastic layers (dropout); reset at
  // the start of each training run.
  nn::RngStream& rng_stream() { return stream_; }

  // Copy encoder tensors from a weight archive, bit for bit. Architectures
  // without a pretrained form reject the call.
  virtual void load_pretrained(const archive::TensorMap& weights);

 protected:
  virtual nn::Var forward_impl(const nn::Var& x) = 0;

  ArchSpec spec_;
  nn::RngStream stream_;
};

// Construct any architecture; init_seed drives fresh-parameter
// initialization so runs are reproducible.
std::unique_ptr<SegmentationModel> build_model(const ArchSpec& spec, uint64_t init_seed);

// Reads a VGG-16 weight archive and validates that all thirteen
// convolutional layers are present with canonical shapes (conv1_1 ..
// conv5_3, each .weight/.bias). fc6/fc7 in convolutional form are optional.
archive::TensorMap load_vgg16_archive(const std::filesystem::path& path);

// Sum of parameter tensor sizes for the 13-layer convolutional stack.
int64_t vgg16_encoder_parameter_count();

}  // namespace cxr::arch
