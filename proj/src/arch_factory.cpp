#include "arch_builders.hpp"

namespace cxr::arch {

ArchName arch_from_string(const std::string& s) {
  if (s == "fcn8s") return ArchName::fcn8s;
  if (s == "unet_vgg16") return ArchName::unet_vgg16;
  if (s == "fc_densenet") return ArchName::fc_densenet;
  if (s == "drn_c26") return ArchName::drn_c26;
  fail(Err::config, "unknown architecture: " + s);
}

const char* arch_name(ArchName a) {
  switch (a) {
    case ArchName::fcn8s: return "fcn8s";
    case ArchName::unet_vgg16: return "unet_vgg16";
    case ArchName::fc_densenet: return "fc_densenet";
    case ArchName::drn_c26: return "drn_c26";
  }
  fail(Err::contract, "bad architecture enum");
}

void ArchSpec::validate() const {
  require(num_classes >= 1, Err::config, "num_classes must be at least 1");
  if (pretrained_encoder)
    require(name == ArchName::fcn8s || name == ArchName::unet_vgg16, Err::config,
            std::string(arch_name(name)) + " has no pretrained encoder form");
}

SegmentationModel::SegmentationModel(ArchSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

nn::Var SegmentationModel::forward(const nn::Var& x) {
  const auto& s = x->value.shape();
  require(s.size() == 4, Err::contract, "input must be (N,3,H,W), got " + x->value.shape_str());
  require(s[1] == 3, Err::contract,
          "input must carry 3 channels, got " + std::to_string(s[1]));
  require(s[2] >= 32 && s[3] >= 32 && s[2] % 32 == 0 && s[3] % 32 == 0, Err::contract,
          "spatial dims must be multiples of 32, got " + x->value.shape_str());
  nn::Var y = forward_impl(x);
  const std::vector<int64_t> want{s[0], spec_.num_classes, s[2], s[3]};
  require(y->value.shape() == want, Err::contract,
          "architecture produced " + y->value.shape_str());
  return y;
}

void SegmentationModel::load_pretrained(const archive::TensorMap&) {
  fail(Err::contract, std::string(arch_name(spec_.name)) + " does not load pretrained weights");
}

std::unique_ptr<SegmentationModel> build_model(const ArchSpec& spec, uint64_t init_seed) {
  spec.validate();
  switch (spec.name) {
    case ArchName::unet_vgg16: return make_unet_vgg16(spec, init_seed);
    case ArchName::fcn8s: return make_fcn8s(spec, init_seed);
    case ArchName::fc_densenet: return make_fc_densenet(spec, init_seed);
    case ArchName::drn_c26: return make_drn_c26(spec, init_seed);
  }
  fail(Err::contract, "bad architecture enum");
}

}  // namespace cxr::arch
