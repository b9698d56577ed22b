#pragma once

#include <cmath>
#include <vector>

#include "cxr/nn/autograd.hpp"

namespace cxr::nn {

// Adam with bias correction; beta1/beta2/eps follow the usual defaults.
class Adam {
 public:
  explicit Adam(std::vector<Var> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    m_.reserve(params_.size());
    v_.reserve(params_.size());
    for (const auto& p : params_) {
      m_.emplace_back(p->value.shape());
      v_.emplace_back(p->value.shape());
    }
  }

  void zero_grad() {
    for (auto& p : params_)
      if (p->grad.numel() == p->value.numel()) p->grad.zero();
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (size_t i = 0; i < params_.size(); ++i) {
      auto& p = params_[i];
      if (p->grad.numel() != p->value.numel()) continue;  // no gradient this step
      float* w = p->value.data();
      const float* g = p->grad.data();
      float* m = m_[i].data();
      float* v = v_[i].data();
      const int64_t n = p->value.numel();
      for (int64_t j = 0; j < n; ++j) {
        m[j] = static_cast<float>(beta1_ * m[j] + (1.0 - beta1_) * g[j]);
        v[j] = static_cast<float>(beta2_ * v[j] + (1.0 - beta2_) * static_cast<double>(g[j]) * g[j]);
        const double mhat = m[j] / bc1;
        const double vhat = v[j] / bc2;
        w[j] -= static_cast<float>(lr_ * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  int64_t steps() const { return t_; }

 private:
  std::vector<Var> params_;
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::vector<Tensor> m_, v_;
};

}  // namespace cxr::nn
