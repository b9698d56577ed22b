#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cxr/core/tensor.hpp"

namespace cxr::nn {

// Reverse-mode autograd over a dynamically built graph. Each forward op
// returns a Node holding its value and a closure that routes gradients to
// the op's parents. Graphs are per-step: everything except parameters is
// freed when the last Var goes out of scope.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on first use
  bool requires_grad = false;
  std::string name;  // set for parameters
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;

  Tensor& ensure_grad() {
    if (grad.numel() != value.numel()) grad = Tensor(value.shape());
    return grad;
  }
};

using Var = std::shared_ptr<Node>;

inline Var constant(Tensor v) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  return n;
}

inline Var parameter(Tensor v, std::string name) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->requires_grad = true;
  n->name = std::move(name);
  return n;
}

inline Var make_op(Tensor value, std::vector<Var> parents, std::function<void(Node&)> bw) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->parents = std::move(parents);
  for (const auto& p : n->parents)
    if (p && p->requires_grad) n->requires_grad = true;
  if (n->requires_grad) n->backward_fn = std::move(bw);
  return n;
}

// Backpropagate from a scalar root. Gradients accumulate into every node
// reachable from the root that requires them.
void backward(const Var& root);

}  // namespace cxr::nn
