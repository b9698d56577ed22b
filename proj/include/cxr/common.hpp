#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cxr {

enum class Err {
  malformed_file,
  depth_violation,
  incomplete_ground_truth,
  format,
  split_integrity,
  degenerate_input,
  weight_load,
  integrity,
  contract,
  undefined_measure,
  empty_structure,
  config,
  non_finite_loss,
  fold_leakage,
  io,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Deterministic RNG used everywhere randomness is needed (weight init,
// batch order, augmentation). Seeds are always explicit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  float uniform_f(float lo, float hi) {
    return std::uniform_real_distribution<float>(lo, hi)(gen_);
  }
  // in [lo, hi] inclusive
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(gen_);
  }
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(gen_);
  }
  uint64_t next() { return gen_(); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Stable seed derivation for sub-streams (per-step augmentation, per-layer
// init) so reruns with the same master seed are bit-identical.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
  uint64_t h = master ^ 0x9e3779b97f4a7c15ull;
  auto mix = [&h](uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
  };
  mix(a);
  mix(b);
  return h;
}

}  // namespace cxr
