#include "cxr/core/pnm.hpp"

#include <fstream>
#include <string>

namespace cxr::pnm {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int64_t parse_dim(const std::string& tok, const char* what) {
  require(!tok.empty(), Err::malformed_file, std::string("truncated header: missing ") + what);
  for (char c : tok)
    require(c >= '0' && c <= '9', Err::malformed_file,
            std::string("non-numeric header field for ") + what + ": " + tok);
  const int64_t v = std::stoll(tok);
  require(v > 0, Err::malformed_file, std::string(what) + " must be positive");
  return v;
}

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Err::io, "cannot open " + path.string());
  return in;
}

void read_header_any(std::istream& in, const char* magic, const std::filesystem::path& path,
                     int64_t& w, int64_t& h, int& maxval) {
  const std::string m = next_token(in);
  require(m == magic, Err::malformed_file,
          path.string() + ": expected " + magic + " magic, found '" + m + "'");
  w = parse_dim(next_token(in), "width");
  h = parse_dim(next_token(in), "height");
  maxval = static_cast<int>(parse_dim(next_token(in), "maxval"));
  require(maxval <= 65535, Err::malformed_file,
          path.string() + ": maxval out of range: " + std::to_string(maxval));
  // Exactly one whitespace byte separates the header from the pixel block;
  // next_token has already consumed it.
}

void read_header(std::istream& in, const char* magic, const std::filesystem::path& path,
                 int64_t& w, int64_t& h, int& maxval) {
  read_header_any(in, magic, path, w, h, maxval);
  require(maxval <= 255, Err::malformed_file,
          path.string() + ": only 8-bit rasters supported, maxval " + std::to_string(maxval));
}

}  // namespace

PgmImage read_pgm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  int64_t w, h;
  int maxval;
  read_header(in, "P5", path, w, h, maxval);
  PgmImage img{MaskGrid(h, w), maxval};
  in.read(reinterpret_cast<char*>(img.pixels.data.data()),
          static_cast<std::streamsize>(img.pixels.data.size()));
  require(in.gcount() == static_cast<std::streamsize>(img.pixels.data.size()), Err::malformed_file,
          path.string() + ": truncated pixel data");
  return img;
}

void write_pgm(const std::filesystem::path& path, const MaskGrid& img, int maxval) {
  require(maxval >= 1 && maxval <= 255, Err::contract, "maxval must be in [1,255]");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Err::io, "cannot write " + path.string());
  out << "P5\n" << img.w << ' ' << img.h << '\n' << maxval << '\n';
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  require(out.good(), Err::io, "short write to " + path.string());
}

GrayImage read_gray_pgm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  int64_t w, h;
  int maxval;
  read_header_any(in, "P5", path, w, h, maxval);
  GrayImage img{Grid<uint16_t>(h, w), maxval};
  if (maxval <= 255) {
    std::vector<uint8_t> raw(static_cast<size_t>(h * w));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    require(in.gcount() == static_cast<std::streamsize>(raw.size()), Err::malformed_file,
            path.string() + ": truncated pixel data");
    for (size_t i = 0; i < raw.size(); ++i) img.pixels.data[i] = raw[i];
  } else {
    std::vector<uint8_t> raw(static_cast<size_t>(2 * h * w));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    require(in.gcount() == static_cast<std::streamsize>(raw.size()), Err::malformed_file,
            path.string() + ": truncated pixel data");
    for (size_t i = 0; i < img.pixels.data.size(); ++i)
      img.pixels.data[i] = static_cast<uint16_t>((uint16_t(raw[2 * i]) << 8) | raw[2 * i + 1]);
  }
  return img;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  auto in = open_binary(path);
  int64_t w, h;
  int maxval;
  read_header(in, "P6", path, w, h, maxval);
  RgbImage img(h, w);
  in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  require(in.gcount() == static_cast<std::streamsize>(img.data.size()), Err::malformed_file,
          path.string() + ": truncated pixel data");
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Err::io, "cannot write " + path.string());
  out << "P6\n" << img.w << ' ' << img.h << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  require(out.good(), Err::io, "short write to " + path.string());
}

}  // namespace cxr::pnm
