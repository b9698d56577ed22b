#include "arch_vgg16.hpp"

#include <cstring>

namespace cxr::arch {

Vgg16Encoder::Vgg16Encoder(Rng& rng) {
  for (const auto& spec : kVggLayers) {
    convs_.push_back(std::make_unique<nn::Conv2d>(spec.cin, spec.cout, 3, 1, 1, rng));
    add_child(spec.name, convs_.back().get());
  }
}

Vgg16Encoder::Features Vgg16Encoder::forward(const nn::Var& x) {
  static constexpr int kStageEnd[5] = {1, 3, 6, 9, 12};
  Features f;
  nn::Var h = x;
  int stage = 0;
  for (size_t i = 0; i < convs_.size(); ++i) {
    h = nn::relu(convs_[i]->forward(h));
    if (int(i) == kStageEnd[stage]) {
      f.relu[size_t(stage)] = h;
      h = nn::maxpool2d(h, 2, 2);
      f.pool[size_t(stage)] = h;
      ++stage;
    }
  }
  return f;
}

void copy_into_param(const nn::Var& param, const Tensor& src, const std::string& what) {
  require(param->value.same_shape(src), Err::weight_load,
          what + ": shape " + src.shape_str() + " does not match parameter " +
              param->value.shape_str());
  std::memcpy(param->value.data(), src.data(), sizeof(float) * size_t(src.numel()));
}

void Vgg16Encoder::load(const archive::TensorMap& weights) {
  for (size_t i = 0; i < kVggLayers.size(); ++i) {
    const std::string base = kVggLayers[i].name;
    const auto wi = weights.tensors.find(base + ".weight");
    const auto bi = weights.tensors.find(base + ".bias");
    require(wi != weights.tensors.end() && bi != weights.tensors.end(), Err::weight_load,
            "weight archive is missing " + base);
    copy_into_param(convs_[i]->weight, wi->second, base + ".weight");
    copy_into_param(convs_[i]->bias, bi->second, base + ".bias");
  }
}

archive::TensorMap load_vgg16_archive(const std::filesystem::path& path) {
  archive::TensorMap m = archive::load(path);
  for (const auto& spec : kVggLayers) {
    const auto wi = m.tensors.find(std::string(spec.name) + ".weight");
    const auto bi = m.tensors.find(std::string(spec.name) + ".bias");
    require(wi != m.tensors.end() && bi != m.tensors.end(), Err::weight_load,
            path.string() + ": missing layer " + spec.name);
    const std::vector<int64_t> want_w{spec.cout, spec.cin, 3, 3};
    require(wi->second.shape() == want_w, Err::weight_load,
            path.string() + ": " + spec.name + ".weight has shape " + wi->second.shape_str());
    require(bi->second.shape() == std::vector<int64_t>{spec.cout}, Err::weight_load,
            path.string() + ": " + spec.name + ".bias has shape " + bi->second.shape_str());
  }
  return m;
}

int64_t vgg16_encoder_parameter_count() {
  int64_t n = 0;
  for (const auto& spec : kVggLayers) n += spec.cout * spec.cin * 9 + spec.cout;
  return n;
}

}  // namespace cxr::arch
