#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "cxr/core/tensor.hpp"

namespace cxr::archive {

// Named-tensor container with a JSON metadata blob and a whole-file
// integrity digest. Binary layout (little-endian):
//   "CXRTENS1" | u64 entry count
//   per entry: u32 name length | name | u32 rank | i64 dims[rank] | f32 data
//   u64 meta length | meta bytes
//   u64 FNV-1a digest of everything above
struct TensorMap {
  std::map<std::string, Tensor> tensors;
  std::string meta_json = "{}";
};

void save(const std::filesystem::path& path, const TensorMap& archive);

// Errors: missing/unreadable file -> weight_load; structural damage ->
// malformed_file; digest mismatch -> integrity.
TensorMap load(const std::filesystem::path& path);

uint64_t fnv1a(const void* bytes, size_t n, uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace cxr::archive
