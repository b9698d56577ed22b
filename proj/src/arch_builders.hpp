#pragma once

#include <memory>

#include "cxr/arch/model.hpp"

namespace cxr::arch {

std::unique_ptr<SegmentationModel> make_unet_vgg16(const ArchSpec& spec, uint64_t init_seed);
std::unique_ptr<SegmentationModel> make_fcn8s(const ArchSpec& spec, uint64_t init_seed);
std::unique_ptr<SegmentationModel> make_fc_densenet(const ArchSpec& spec, uint64_t init_seed);
std::unique_ptr<SegmentationModel> make_drn_c26(const ArchSpec& spec, uint64_t init_seed);

}  // namespace cxr::arch
