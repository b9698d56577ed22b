#include "cxr/losses.hpp"

#include <algorithm>
#include <cmath>

#include "cxr/common.hpp"

namespace cxr::losses {

namespace {

constexpr double kBceClamp = 1e-7;

void check_pair(std::span<const float> s, std::span<const float> g, std::span<float> grad) {
  require(s.size() == g.size(), Err::contract, "score/target length mismatch");
  require(!s.empty(), Err::degenerate_input, "empty score map");
  require(grad.empty() || grad.size() == s.size(), Err::contract, "gradient buffer length mismatch");
}

}  // namespace

Kind kind_from_string(const std::string& s) {
  if (s == "dsc" || s == "dice") return Kind::dsc;
  if (s == "jsc" || s == "jaccard") return Kind::jsc;
  if (s == "tversky") return Kind::tversky;
  if (s == "bce") return Kind::bce;
  fail(Err::config, "unknown loss kind: " + s);
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::dsc: return "dsc";
    case Kind::jsc: return "jsc";
    case Kind::tversky: return "tversky";
    case Kind::bce: return "bce";
  }
  fail(Err::contract, "bad loss kind");
}

ClassSet::ClassSet(std::vector<std::string> names) : classes(std::move(names)) {
  require(!classes.empty(), Err::config, "class set must name at least one structure");
  for (size_t i = 0; i < classes.size(); ++i) {
    require(!classes[i].empty(), Err::config, "empty class name");
    for (size_t j = i + 1; j < classes.size(); ++j)
      require(classes[i] != classes[j], Err::config, "duplicate class name: " + classes[i]);
  }
}

void LossSpec::validate() const {
  if (kind == Kind::tversky) {
    require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, Err::config,
            "tversky alpha must lie in (0,1)");
    require(std::isfinite(beta) && beta > 0.0 && beta < 1.0, Err::config,
            "tversky beta must lie in (0,1)");
  }
  require(std::isfinite(epsilon) && epsilon > 0.0, Err::config, "loss epsilon must be > 0");
}

double dsc_loss(std::span<const float> s, std::span<const float> g, double eps,
                std::span<float> grad) {
  check_pair(s, g, grad);
  double inter = 0.0, sum_s = 0.0, sum_g = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    inter += double(s[i]) * g[i];
    sum_s += s[i];
    sum_g += g[i];
  }
  const double a = 2.0 * inter + eps;
  const double b = sum_s + sum_g + eps;
  if (!grad.empty()) {
    const double inv_b2 = 1.0 / (b * b);
    for (size_t i = 0; i < s.size(); ++i)
      grad[i] = static_cast<float>(-(2.0 * g[i] * b - a) * inv_b2);
  }
  return 1.0 - a / b;
}

double jsc_loss(std::span<const float> s, std::span<const float> g, double eps,
                std::span<float> grad) {
  check_pair(s, g, grad);
  double inter = 0.0, sum_s = 0.0, sum_g = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    inter += double(s[i]) * g[i];
    sum_s += s[i];
    sum_g += g[i];
  }
  const double a = inter + eps;
  const double b = sum_s + sum_g - inter + eps;
  if (!grad.empty()) {
    const double inv_b2 = 1.0 / (b * b);
    for (size_t i = 0; i < s.size(); ++i)
      grad[i] = static_cast<float>(-(g[i] * b - a * (1.0 - g[i])) * inv_b2);
  }
  return 1.0 - a / b;
}

double tversky_loss(std::span<const float> s, std::span<const float> g, double alpha, double beta,
                    double eps, std::span<float> grad) {
  check_pair(s, g, grad);
  require(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0, Err::config,
          "tversky weights must lie in (0,1)");
  double inter = 0.0, fp = 0.0, fn = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    inter += double(s[i]) * g[i];
    fp += double(s[i]) * (1.0 - g[i]);
    fn += (1.0 - double(s[i])) * g[i];
  }
  const double a = inter + eps;
  const double b = inter + alpha * fp + beta * fn + eps;
  if (!grad.empty()) {
    const double inv_b2 = 1.0 / (b * b);
    for (size_t i = 0; i < s.size(); ++i) {
      const double db = g[i] + alpha * (1.0 - g[i]) - beta * g[i];
      grad[i] = static_cast<float>(-(g[i] * b - a * db) * inv_b2);
    }
  }
  return 1.0 - a / b;
}

double bce_loss(std::span<const float> s, std::span<const float> g, std::span<float> grad) {
  check_pair(s, g, grad);
  const double inv_n = 1.0 / double(s.size());
  double acc = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    const double p = std::clamp(double(s[i]), kBceClamp, 1.0 - kBceClamp);
    acc += g[i] * std::log(p) + (1.0 - g[i]) * std::log(1.0 - p);
    if (!grad.empty())
      grad[i] = static_cast<float>(-inv_n * (g[i] / p - (1.0 - g[i]) / (1.0 - p)));
  }
  return -inv_n * acc;
}

double single_loss(const LossSpec& spec, std::span<const float> s, std::span<const float> g,
                   std::span<float> grad) {
  spec.validate();
  switch (spec.kind) {
    case Kind::dsc: return dsc_loss(s, g, spec.epsilon, grad);
    case Kind::jsc: return jsc_loss(s, g, spec.epsilon, grad);
    case Kind::tversky: return tversky_loss(s, g, spec.alpha, spec.beta, spec.epsilon, grad);
    case Kind::bce: return bce_loss(s, g, grad);
  }
  fail(Err::contract, "bad loss kind");
}

double total_loss(const LossSpec& spec, std::span<const float> s_all, std::span<const float> g_all,
                  int64_t num_classes, std::span<float> grad) {
  require(num_classes >= 1, Err::config, "need at least one class");
  require(s_all.size() == g_all.size(), Err::contract, "score/target length mismatch");
  require(s_all.size() % size_t(num_classes) == 0, Err::contract,
          "map length not divisible by class count");
  require(grad.empty() || grad.size() == s_all.size(), Err::contract,
          "gradient buffer length mismatch");
  const size_t hw = s_all.size() / size_t(num_classes);
  double total = 0.0;
  for (int64_t c = 0; c < num_classes; ++c) {
    const size_t off = size_t(c) * hw;
    total += single_loss(spec, s_all.subspan(off, hw), g_all.subspan(off, hw),
                         grad.empty() ? std::span<float>{} : grad.subspan(off, hw));
  }
  return total;
}

nn::Var batch_loss(const nn::Var& scores, const Tensor& targets, const LossSpec& spec) {
  spec.validate();
  const auto& shape = scores->value.shape();
  require(shape.size() == 4, Err::contract, "batch loss expects (N,C,H,W) scores");
  require(scores->value.same_shape(targets), Err::contract,
          "scores " + scores->value.shape_str() + " vs targets " + targets.shape_str());
  const int64_t n = shape[0], c = shape[1];
  const int64_t per_sample = scores->value.numel() / n;

  // Fused node: the whole dLoss/dScores field is computed here and replayed
  // on backward.
  Tensor dscores(shape);
  double total = 0.0;
  const float* sp = scores->value.data();
  const float* gp = targets.data();
  for (int64_t i = 0; i < n; ++i) {
    const size_t off = size_t(i) * per_sample;
    total += total_loss(spec, {sp + off, size_t(per_sample)}, {gp + off, size_t(per_sample)}, c,
                        {dscores.data() + off, size_t(per_sample)});
  }
  const double inv_n = 1.0 / double(n);
  for (int64_t i = 0; i < dscores.numel(); ++i) dscores[i] *= static_cast<float>(inv_n);

  require(std::isfinite(total), Err::non_finite_loss, "loss is not finite");
  auto x = scores;
  auto saved = std::make_shared<Tensor>(std::move(dscores));
  return nn::make_op(Tensor({1}, static_cast<float>(total * inv_n)), {scores},
                     [x, saved](nn::Node& node) {
                       if (!x->requires_grad) return;
                       x->ensure_grad();
                       const float go = node.grad[0];
                       for (int64_t i = 0; i < saved->numel(); ++i) x->grad[i] += go * (*saved)[i];
                     });
}

double soft_dice(const Tensor& scores, const Tensor& targets, double eps) {
  require(scores.same_shape(targets), Err::contract, "shape mismatch");
  const auto& shape = scores.shape();
  require(shape.size() == 4, Err::contract, "expects (N,C,H,W)");
  const int64_t maps = shape[0] * shape[1];
  const int64_t hw = shape[2] * shape[3];
  double acc = 0.0;
  for (int64_t m = 0; m < maps; ++m) {
    const float* s = scores.data() + m * hw;
    const float* g = targets.data() + m * hw;
    double inter = 0.0, sum_s = 0.0, sum_g = 0.0;
    for (int64_t i = 0; i < hw; ++i) {
      inter += double(s[i]) * g[i];
      sum_s += s[i];
      sum_g += g[i];
    }
    acc += (2.0 * inter + eps) / (sum_s + sum_g + eps);
  }
  return acc / double(maps);
}

}  // namespace cxr::losses
