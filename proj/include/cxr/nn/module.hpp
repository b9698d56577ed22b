#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cxr/nn/ops.hpp"

namespace cxr::nn {

// Deterministic seed stream for stochastic layers (dropout). Owned by the
// enclosing model; reset together with the training seed.
struct RngStream {
  uint64_t base = 0;
  uint64_t counter = 0;
  void reset(uint64_t seed) {
    base = seed;
    counter = 0;
  }
  uint64_t next() { return derive_seed(base, ++counter); }
};

class Module {
 public:
  Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;
  virtual ~Module() = default;

  void set_training(bool t) {
    training_ = t;
    for (auto& [name, m] : children_) m->set_training(t);
  }
  bool training() const { return training_; }

  std::vector<std::pair<std::string, Var>> named_parameters() const {
    std::vector<std::pair<std::string, Var>> out;
    collect_params("", out);
    return out;
  }
  std::vector<Var> parameters() const {
    std::vector<Var> out;
    for (auto& [name, v] : named_parameters()) out.push_back(v);
    return out;
  }
  std::vector<std::pair<std::string, Tensor*>> named_buffers() {
    std::vector<std::pair<std::string, Tensor*>> out;
    collect_buffers("", out);
    return out;
  }
  int64_t parameter_count() const {
    int64_t n = 0;
    for (auto& [name, v] : named_parameters()) n += v->value.numel();
    return n;
  }

 protected:
  Var add_param(const std::string& name, Tensor t) {
    params_.emplace_back(name, parameter(std::move(t), name));
    return params_.back().second;
  }
  void add_buffer(const std::string& name, Tensor* t) { buffers_.emplace_back(name, t); }
  void add_child(const std::string& name, Module* m) { children_.emplace_back(name, m); }

  bool training_ = true;

 private:
  void collect_params(const std::string& prefix,
                      std::vector<std::pair<std::string, Var>>& out) const {
    for (auto& [name, v] : params_) out.emplace_back(prefix + name, v);
    for (auto& [name, m] : children_) m->collect_params(prefix + name + ".", out);
  }
  void collect_buffers(const std::string& prefix,
                       std::vector<std::pair<std::string, Tensor*>>& out) {
    for (auto& [name, t] : buffers_) out.emplace_back(prefix + name, t);
    for (auto& [name, m] : children_) m->collect_buffers(prefix + name + ".", out);
  }

  std::vector<std::pair<std::string, Var>> params_;
  std::vector<std::pair<std::string, Tensor*>> buffers_;
  std::vector<std::pair<std::string, Module*>> children_;
};

// Fan-in scaled uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
inline Tensor fan_in_uniform(std::vector<int64_t> shape, int64_t fan_in, Rng& rng) {
  Tensor t(std::move(shape));
  const float bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform_f(-bound, bound);
  return t;
}

class Conv2d : public Module {
 public:
  Conv2d(int64_t cin, int64_t cout, int k, int stride, int pad, Rng& rng, int dilation = 1,
         bool bias = true)
      : stride_(stride), pad_(pad), dilation_(dilation) {
    const int64_t fan_in = cin * k * k;
    weight = add_param("weight", fan_in_uniform({cout, cin, k, k}, fan_in, rng));
    if (bias) this->bias = add_param("bias", fan_in_uniform({cout}, fan_in, rng));
  }
  Var forward(const Var& x) { return conv2d(x, weight, bias, stride_, pad_, dilation_); }

  Var weight, bias;

 private:
  int stride_, pad_, dilation_;
};

class ConvTranspose2d : public Module {
 public:
  ConvTranspose2d(int64_t cin, int64_t cout, int k, int stride, int pad, Rng& rng,
                  int output_padding = 0, bool bias = true)
      : stride_(stride), pad_(pad), output_padding_(output_padding) {
    const int64_t fan_in = cin * k * k;
    weight = add_param("weight", fan_in_uniform({cin, cout, k, k}, fan_in, rng));
    if (bias) this->bias = add_param("bias", fan_in_uniform({cout}, fan_in, rng));
  }
  Var forward(const Var& x) {
    return conv_transpose2d(x, weight, bias, stride_, pad_, output_padding_);
  }

  Var weight, bias;

 private:
  int stride_, pad_, output_padding_;
};

class BatchNorm2d : public Module {
 public:
  explicit BatchNorm2d(int64_t c, double momentum = 0.1, double eps = 1e-5)
      : momentum_(momentum), eps_(eps), running_mean_({c}), running_var_({c}, 1.0f) {
    gamma = add_param("weight", Tensor({c}, 1.0f));
    beta = add_param("bias", Tensor({c}));
    add_buffer("running_mean", &running_mean_);
    add_buffer("running_var", &running_var_);
  }
  Var forward(const Var& x) {
    return batch_norm2d(x, gamma, beta, running_mean_, running_var_, training(), momentum_, eps_);
  }

  Var gamma, beta;

 private:
  double momentum_, eps_;
  Tensor running_mean_, running_var_;
};

class Dropout : public Module {
 public:
  Dropout(double p, RngStream* stream) : p_(p), stream_(stream) {}
  Var forward(const Var& x) {
    if (!training() || p_ == 0.0) return x;
    return dropout(x, p_, true, stream_->next());
  }

 private:
  double p_;
  RngStream* stream_;
};

}  // namespace cxr::nn
