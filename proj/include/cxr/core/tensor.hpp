#pragma once

#include <cstring>
#include <numeric>
#include <string>
#include <vector>

#include "cxr/common.hpp"

namespace cxr {

// Dense row-major float tensor. Shapes follow the (N, C, H, W) convention
// where four axes are used.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape) : shape_(std::move(shape)) {
    data_.assign(count(shape_), 0.0f);
  }
  Tensor(std::vector<int64_t> shape, float fill) : shape_(std::move(shape)) {
    data_.assign(count(shape_), fill);
  }
  Tensor(std::vector<int64_t> shape, std::vector<float> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    require(static_cast<int64_t>(data_.size()) == count(shape_), Err::contract,
            "tensor data size does not match shape");
  }

  static Tensor scalar(float v) { return Tensor({1}, std::vector<float>{v}); }

  const std::vector<int64_t>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int64_t dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
  int64_t numel() const { return static_cast<int64_t>(data_.size()); }
  bool empty() const { return data_.empty(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  const std::vector<float>& data_vec() const { return data_; }
  float& operator[](int64_t i) { return data_[static_cast<size_t>(i)]; }
  float operator[](int64_t i) const { return data_[static_cast<size_t>(i)]; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  // Same data under a new shape with equal element count.
  Tensor reshaped(std::vector<int64_t> shape) const {
    require(count(shape) == numel(), Err::contract, "reshape must preserve element count");
    return Tensor(std::move(shape), data_);
  }

  void zero() { std::memset(data_.data(), 0, data_.size() * sizeof(float)); }

  std::string shape_str() const {
    std::string s = "(";
    for (size_t i = 0; i < shape_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape_[i]);
    }
    return s + ")";
  }

  static int64_t count(const std::vector<int64_t>& shape) {
    int64_t n = 1;
    for (int64_t d : shape) {
      require(d >= 0, Err::contract, "negative tensor dimension");
      n *= d;
    }
    return n;
  }

 private:
  std::vector<int64_t> shape_;
  std::vector<float> data_;
};

}  // namespace cxr
