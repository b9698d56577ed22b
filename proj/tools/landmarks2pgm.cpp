// Rasterizes closed landmark polygons into a binary PGM mask. Each input
// file is one polygon (`x y` per line, last point joined back to the first);
// multiple files OR into one raster. Fill rule is even-odd at pixel centers.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cxr/common.hpp"
#include "cxr/core/grid.hpp"
#include "cxr/core/pnm.hpp"

namespace {

struct Pt {
  double x = 0.0, y = 0.0;
};

std::vector<Pt> read_landmarks(const std::string& path) {
  std::ifstream in(path);
  cxr::require(in.good(), cxr::Err::io, "cannot open " + path);
  std::vector<Pt> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Pt p;
    if (ls >> p.x) {
      const std::string at = path + " line " + std::to_string(lineno);
      cxr::require(bool(ls >> p.y), cxr::Err::malformed_file, at + ": want 'x y'");
      std::string extra;
      cxr::require(!(ls >> extra), cxr::Err::malformed_file, at + ": trailing token '" + extra + "'");
      pts.push_back(p);
    } else {
      std::istringstream check(line);
      std::string token;
      cxr::require(!(check >> token), cxr::Err::malformed_file,
                   path + " line " + std::to_string(lineno) + ": want 'x y', got '" + token + "'");
    }
  }
  cxr::require(pts.size() >= 3, cxr::Err::malformed_file,
               path + ": a polygon needs at least 3 points, got " + std::to_string(pts.size()));
  return pts;
}

void fill_polygon(cxr::MaskGrid& m, const std::vector<Pt>& poly) {
  for (int64_t r = 0; r < m.h; ++r) {
    const double y = double(r) + 0.5;
    std::vector<double> xs;
    for (size_t i = 0; i < poly.size(); ++i) {
      const Pt& a = poly[i];
      const Pt& b = poly[(i + 1) % poly.size()];
      // Half-open inclusion so a scanline through a vertex counts one edge.
      if ((a.y <= y) != (b.y <= y)) xs.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
    }
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel centers (c + 0.5) inside [xs[k], xs[k+1]].
      const int64_t c0 = std::max<int64_t>(int64_t(std::ceil(xs[k] - 0.5)), 0);
      const int64_t c1 = std::min<int64_t>(int64_t(std::floor(xs[k + 1] - 0.5)), m.w - 1);
      for (int64_t c = c0; c <= c1; ++c) m(r, c) = 255;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rasterize closed landmark polygons into a binary PGM mask"};
  std::vector<std::string> inputs;
  std::string out;
  int64_t size = 1024;
  app.add_option("input", inputs, "landmark files, one 'x y' pair per line (pixel units)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--out", out, "output PGM path")->required();
  app.add_option("--size", size, "output raster side length (default 1024)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    cxr::MaskGrid mask(size, size);
    for (const auto& f : inputs) fill_polygon(mask, read_landmarks(f));
    cxr::pnm::write_pgm(out, mask);
    std::cerr << "wrote " << out << " (" << size << "x" << size << ", " << inputs.size()
              << " polygon(s))\n";
    return 0;
  } catch (const cxr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
