#include "cxr/core/archive.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include "cxr/common.hpp"

namespace cxr::archive {

namespace {

constexpr char kMagic[8] = {'C', 'X', 'R', 'T', 'E', 'N', 'S', '1'};
constexpr int64_t kMaxRank = 16;

void append(std::vector<char>& buf, const void* p, size_t n) {
  const char* b = static_cast<const char*>(p);
  buf.insert(buf.end(), b, b + n);
}

template <typename T>
void append_val(std::vector<char>& buf, T v) {
  append(buf, &v, sizeof(v));
}

struct Reader {
  const std::vector<char>& buf;
  size_t pos = 0;
  const std::string file;

  void read(void* out, size_t n) {
    require(pos + n <= buf.size(), Err::malformed_file, file + ": truncated archive");
    std::memcpy(out, buf.data() + pos, n);
    pos += n;
  }
  template <typename T>
  T read_val() {
    T v;
    read(&v, sizeof(v));
    return v;
  }
};

}  // namespace

uint64_t fnv1a(const void* bytes, size_t n, uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(bytes);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

void save(const std::filesystem::path& path, const TensorMap& archive) {
  std::vector<char> buf;
  append(buf, kMagic, sizeof(kMagic));
  append_val<uint64_t>(buf, archive.tensors.size());
  for (const auto& [name, t] : archive.tensors) {
    require(!name.empty(), Err::contract, "tensor name must be non-empty");
    append_val<uint32_t>(buf, static_cast<uint32_t>(name.size()));
    append(buf, name.data(), name.size());
    append_val<uint32_t>(buf, static_cast<uint32_t>(t.shape().size()));
    for (int64_t d : t.shape()) append_val<int64_t>(buf, d);
    append(buf, t.data(), sizeof(float) * static_cast<size_t>(t.numel()));
  }
  append_val<uint64_t>(buf, archive.meta_json.size());
  append(buf, archive.meta_json.data(), archive.meta_json.size());
  append_val<uint64_t>(buf, fnv1a(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary);
  require(out.good(), Err::io, "cannot write " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  require(out.good(), Err::io, "short write to " + path.string());
}

TensorMap load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  require(in.good(), Err::weight_load, "cannot open weight archive " + path.string());
  const auto size = static_cast<size_t>(in.tellg());
  in.seekg(0);
  std::vector<char> buf(size);
  in.read(buf.data(), static_cast<std::streamsize>(size));
  require(in.gcount() == static_cast<std::streamsize>(size), Err::weight_load,
          "cannot read " + path.string());

  require(size >= sizeof(kMagic) + 2 * sizeof(uint64_t), Err::malformed_file,
          path.string() + ": too short to be an archive");
  uint64_t stored;
  std::memcpy(&stored, buf.data() + size - sizeof(stored), sizeof(stored));
  const uint64_t actual = fnv1a(buf.data(), size - sizeof(stored));
  require(stored == actual, Err::integrity,
          path.string() + ": digest mismatch — file corrupt or tampered");

  Reader r{buf, 0, path.string()};
  char magic[8];
  r.read(magic, sizeof(magic));
  require(std::memcmp(magic, kMagic, sizeof(kMagic)) == 0, Err::malformed_file,
          path.string() + ": bad magic");

  TensorMap out;
  const uint64_t count = r.read_val<uint64_t>();
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t name_len = r.read_val<uint32_t>();
    std::string name(name_len, '\0');
    r.read(name.data(), name_len);
    const uint32_t rank = r.read_val<uint32_t>();
    require(rank <= kMaxRank, Err::malformed_file, path.string() + ": absurd tensor rank");
    std::vector<int64_t> shape(rank);
    int64_t numel = 1;
    for (auto& d : shape) {
      d = r.read_val<int64_t>();
      require(d > 0, Err::malformed_file, path.string() + ": non-positive dimension");
      numel *= d;
    }
    Tensor t(shape);
    r.read(t.data(), sizeof(float) * static_cast<size_t>(numel));
    require(out.tensors.emplace(std::move(name), std::move(t)).second, Err::malformed_file,
            path.string() + ": duplicate tensor name");
  }
  const uint64_t meta_len = r.read_val<uint64_t>();
  out.meta_json.resize(meta_len);
  r.read(out.meta_json.data(), meta_len);
  require(r.pos == size - sizeof(uint64_t), Err::malformed_file,
          path.string() + ": trailing garbage before digest");
  return out;
}

}  // namespace cxr::archive
