#include "cxr/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "cxr/common.hpp"
#include "cxr/core/grid.hpp"
#include "cxr/losses.hpp"
#include "cxr/metrics.hpp"

namespace cxr::selfcheck {

namespace {

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Random binary mask with at least `min_fg` foreground pixels: exactly k ones
// spread by a Fisher-Yates pass so the count is under direct control.
std::vector<float> random_binary_map(Rng& rng, size_t n, int64_t min_fg) {
  const int64_t k = rng.uniform_int(min_fg, int64_t(n) - 1);
  std::vector<float> m(n, 0.0f);
  std::fill(m.begin(), m.begin() + k, 1.0f);
  for (size_t i = n - 1; i > 0; --i)
    std::swap(m[i], m[size_t(rng.uniform_int(0, int64_t(i)))]);
  return m;
}

// Union of random rectangles and discs on a small square grid; never empty.
MaskGrid random_mask(Rng& rng) {
  const int64_t hw = rng.uniform_int(8, 32);
  MaskGrid m(hw, hw);
  const int64_t blobs = rng.uniform_int(1, 3);
  for (int64_t b = 0; b < blobs; ++b) {
    if (rng.uniform_int(0, 1) == 0) {
      const int64_t r0 = rng.uniform_int(0, hw - 1), r1 = rng.uniform_int(r0, hw - 1);
      const int64_t c0 = rng.uniform_int(0, hw - 1), c1 = rng.uniform_int(c0, hw - 1);
      for (int64_t r = r0; r <= r1; ++r)
        for (int64_t c = c0; c <= c1; ++c) m(r, c) = 1;
    } else {
      const int64_t cr = rng.uniform_int(0, hw - 1), cc = rng.uniform_int(0, hw - 1);
      const int64_t rad = rng.uniform_int(1, std::max<int64_t>(1, hw / 3));
      for (int64_t r = 0; r < hw; ++r)
        for (int64_t c = 0; c < hw; ++c)
          if ((r - cr) * (r - cr) + (c - cc) * (c - cc) < rad * rad) m(r, c) = 1;
    }
  }
  return m;
}

// Boundary points recomputed independently of the engine under test: a
// column-major walk keeping foreground pixels that do not survive a 4-way
// erosion, with out-of-bounds treated as background so the frame counts.
std::vector<std::pair<int64_t, int64_t>> erosion_boundary(const MaskGrid& m) {
  std::vector<std::pair<int64_t, int64_t>> pts;
  for (int64_t c = 0; c < m.w; ++c)
    for (int64_t r = 0; r < m.h; ++r) {
      if (!m(r, c)) continue;
      const bool interior = r > 0 && r + 1 < m.h && c > 0 && c + 1 < m.w && m(r - 1, c) &&
                            m(r + 1, c) && m(r, c - 1) && m(r, c + 1);
      if (!interior) pts.emplace_back(r, c);
    }
  return pts;
}

double brute_directed_mean(const std::vector<std::pair<int64_t, int64_t>>& from,
                           const std::vector<std::pair<int64_t, int64_t>>& to) {
  double acc = 0.0;
  for (const auto& [r, c] : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [r2, c2] : to)
      best = std::min(best, std::hypot(double(r - r2), double(c - c2)));
    acc += best;
  }
  return acc / double(from.size());
}

}  // namespace

SuiteResult loss_identities(int pairs, double tol_identity, double tol_zero, uint64_t seed) {
  SuiteResult res{"loss-identities", false, ""};
  Rng rng(seed);
  const size_t n = 96;
  std::vector<float> s(n), g(n);
  double worst_tie = 0.0;
  for (int p = 0; p < pairs; ++p) {
    const bool binary_target = (p % 2) == 1;
    for (size_t i = 0; i < n; ++i) {
      s[i] = rng.uniform_f(0.001f, 0.999f);
      g[i] = binary_target ? float(rng.uniform_int(0, 1)) : rng.uniform_f(0.0f, 1.0f);
    }
    const double eps = std::pow(10.0, rng.uniform(-3.0, 1.0));

    // Balanced Tversky folds into Dice with the smoothing term doubled.
    const double tv = losses::tversky_loss(s, g, 0.5, 0.5, eps);
    const double dd = losses::dsc_loss(s, g, 2.0 * eps);
    double delta = std::abs(tv - dd);
    if (delta > tol_identity) {
      res.detail = strf("pair %d: balanced tversky %.17g != dice at doubled smoothing %.17g "
                        "(|delta| %.3g > %.3g)",
                        p, tv, dd, delta, tol_identity);
      return res;
    }
    worst_tie = std::max(worst_tie, delta);

    // With smoothing off the two overlap losses are tied through d/(2-d).
    const double dice = 1.0 - losses::dsc_loss(s, g, 0.0);
    const double jl = losses::jsc_loss(s, g, 0.0);
    delta = std::abs(jl - (1.0 - dice / (2.0 - dice)));
    if (delta > tol_identity) {
      res.detail = strf("pair %d: jaccard loss %.17g breaks the d/(2-d) tie to dice %.17g "
                        "(|delta| %.3g > %.3g)",
                        p, jl, dice, delta, tol_identity);
      return res;
    }
    worst_tie = std::max(worst_tie, delta);
  }

  // A binary mask against itself is a perfect match: exactly zero for the
  // overlap family, and only the probability clamp keeps cross-entropy off
  // zero, so its floor sets the scale of tol_zero.
  Rng rng2(derive_seed(seed, 1));
  const size_t n2 = 400;
  double worst_zero = 0.0;
  for (int p = 0; p < std::max(1, pairs / 10); ++p) {
    const std::vector<float> b = random_binary_map(rng2, n2, 100);
    const double eps = std::pow(10.0, rng2.uniform(-3.0, 1.0));
    const double vals[] = {losses::dsc_loss(b, b, eps), losses::jsc_loss(b, b, eps),
                           losses::tversky_loss(b, b, 0.3, 0.7, eps), losses::bce_loss(b, b)};
    const char* names[] = {"dsc", "jsc", "tversky", "bce"};
    for (int k = 0; k < 4; ++k) {
      if (std::abs(vals[k]) > tol_zero) {
        res.detail = strf("pair %d: %s loss of a binary mask against itself is %.9g "
                          "(|value| > %.3g)",
                          p, names[k], vals[k], tol_zero);
        return res;
      }
      worst_zero = std::max(worst_zero, std::abs(vals[k]));
    }
  }

  res.passed = true;
  res.detail = strf("%d map pairs: tversky/dice and jaccard/dice ties hold (worst |delta| %.2g); "
                    "perfect binary matches score zero (cross-entropy floor %.2g)",
                    pairs, worst_tie, worst_zero);
  return res;
}

SuiteResult loss_gradients(int probes_per_loss, double step, double tol, uint64_t seed) {
  SuiteResult res{"loss-gradients", false, ""};
  Rng rng(seed);
  const size_t n = 48;
  std::vector<float> s(n), g(n), grad(n);
  losses::LossSpec specs[4];
  specs[0].kind = losses::Kind::dsc;
  specs[1].kind = losses::Kind::jsc;
  specs[2].kind = losses::Kind::tversky;
  specs[3].kind = losses::Kind::bce;
  double worst = 0.0;
  for (const auto& spec : specs) {
    for (int p = 0; p < probes_per_loss; ++p) {
      for (size_t i = 0; i < n; ++i) {
        s[i] = rng.uniform_f(0.05f, 0.95f);
        g[i] = (p % 2) ? float(rng.uniform_int(0, 1)) : rng.uniform_f(0.0f, 1.0f);
      }
      losses::single_loss(spec, s, g, grad);
      const size_t i = size_t(rng.uniform_int(0, int64_t(n) - 1));
      const float orig = s[i];
      const float sp = orig + float(step), sm = orig - float(step);
      s[i] = sp;
      const double lp = losses::single_loss(spec, s, g);
      s[i] = sm;
      const double lm = losses::single_loss(spec, s, g);
      s[i] = orig;
      // The achieved float perturbation, not the requested one, goes in the
      // denominator so quantisation of s does not masquerade as error.
      const double fd = (lp - lm) / (double(sp) - double(sm));
      const double delta = std::abs(fd - double(grad[i]));
      if (delta > tol * std::max(1.0, std::abs(fd))) {
        res.detail = strf("%s probe %d, index %zu: closed-form gradient %.9g vs "
                          "finite difference %.9g (|delta| %.3g > %.3g)",
                          losses::kind_name(spec.kind), p, i, double(grad[i]), fd, delta, tol);
        return res;
      }
      worst = std::max(worst, delta);
    }
  }
  res.passed = true;
  res.detail = strf("%d central-difference probes per loss kind match the closed-form "
                    "gradients (worst |delta| %.2g)",
                    probes_per_loss, worst);
  return res;
}

SuiteResult macd_oracle(int pairs, double tol, uint64_t seed) {
  SuiteResult res{"macd-oracle", false, ""};
  Rng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    MaskGrid a = random_mask(rng);
    MaskGrid b = random_mask(rng);
    // Masks must share a shape; redraw b on a's grid when sizes diverge.
    if (!a.same_shape(b)) {
      b = MaskGrid(a.h, a.w);
      const int64_t r0 = rng.uniform_int(0, a.h - 1), r1 = rng.uniform_int(r0, a.h - 1);
      const int64_t c0 = rng.uniform_int(0, a.w - 1), c1 = rng.uniform_int(c0, a.w - 1);
      for (int64_t r = r0; r <= r1; ++r)
        for (int64_t c = c0; c <= c1; ++c) b(r, c) = 1;
    }
    const double mm = rng.uniform(0.1, 3.0);

    const auto ca = erosion_boundary(a);
    const auto cb = erosion_boundary(b);
    const double want = 0.5 * mm * (brute_directed_mean(ca, cb) + brute_directed_mean(cb, ca));
    const double got = metrics::macd(a, b, mm);
    const double delta = std::abs(got - want);
    if (delta > tol * std::max(1.0, want)) {
      res.detail = strf("pair %d (%lldx%lld): engine %.17g vs brute force %.17g "
                        "(|delta| %.3g > %.3g)",
                        p, (long long)a.h, (long long)a.w, got, want, delta, tol);
      return res;
    }
    worst = std::max(worst, delta);

    if (metrics::macd(a, a, mm) != 0.0) {
      res.detail = strf("pair %d: self-distance is %.17g, expected exactly zero", p,
                        metrics::macd(a, a, mm));
      return res;
    }
    if (metrics::macd(a, b, mm) != metrics::macd(b, a, mm)) {
      res.detail = strf("pair %d: argument order changes the distance (%.17g vs %.17g)", p,
                        metrics::macd(a, b, mm), metrics::macd(b, a, mm));
      return res;
    }
    // Power-of-two pitch scaling is exact in floating point, so bit equality
    // is the right bar here.
    if (metrics::macd(a, b, 2.0 * mm) != 2.0 * metrics::macd(a, b, mm)) {
      res.detail = strf("pair %d: doubling the pixel pitch does not double the distance", p);
      return res;
    }
  }
  res.passed = true;
  res.detail = strf("%d random mask pairs match a brute-force recount (worst |delta| %.2g); "
                    "self-distance, symmetry and pitch scaling are exact",
                    pairs, worst);
  return res;
}

std::vector<SuiteResult> run_all() {
  return {loss_identities(), loss_gradients(), macd_oracle()};
}

}  // namespace cxr::selfcheck
