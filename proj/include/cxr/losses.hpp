#pragma once

#include <span>
#include <string>
#include <vector>

#include "cxr/nn/autograd.hpp"

namespace cxr::losses {

enum class Kind { dsc, jsc, tversky, bce };

Kind kind_from_string(const std::string& s);
const char* kind_name(Kind k);

// Ordered class list for multi-class training; channel order follows it.
struct ClassSet {
  std::vector<std::string> classes;

  explicit ClassSet(std::vector<std::string> names);
  int64_t size() const { return static_cast<int64_t>(classes.size()); }
};

struct LossSpec {
  Kind kind = Kind::dsc;
  double alpha = 0.3;  // Tversky false-positive weight
  double beta = 0.7;   // Tversky false-negative weight
  double epsilon = 1.0;

  void validate() const;
};

// Per-map soft losses on score maps S in [0,1] against binary G. Each
// returns the loss and, when grad is non-empty, writes dLoss/dS into it
// (same length as s; overwritten, not accumulated).
double dsc_loss(std::span<const float> s, std::span<const float> g, double eps,
                std::span<float> grad = {});
double jsc_loss(std::span<const float> s, std::span<const float> g, double eps,
                std::span<float> grad = {});
double tversky_loss(std::span<const float> s, std::span<const float> g, double alpha, double beta,
                    double eps, std::span<float> grad = {});
double bce_loss(std::span<const float> s, std::span<const float> g, std::span<float> grad = {});

double single_loss(const LossSpec& spec, std::span<const float> s, std::span<const float> g,
                   std::span<float> grad = {});

// Multi-class total: sum of per-class losses for one sample laid out (C, HW).
double total_loss(const LossSpec& spec, std::span<const float> s_all, std::span<const float> g_all,
                  int64_t num_classes, std::span<float> grad = {});

// Autograd node over a batch: scores (N,C,H,W) against binary targets of the
// same shape. Per-sample total losses averaged over the batch.
nn::Var batch_loss(const nn::Var& scores, const Tensor& targets, const LossSpec& spec);

// Mean soft Dice index over all (sample, class) pairs; evaluation helper for
// overfit checks. Small eps so the value reflects overlap, not smoothing.
double soft_dice(const Tensor& scores, const Tensor& targets, double eps = 1e-7);

}  // namespace cxr::losses
