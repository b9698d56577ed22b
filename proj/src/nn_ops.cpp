#include "cxr/nn/ops.hpp"

#include <cblas.h>

#include <cmath>
#include <cstring>

#include "cxr/common.hpp"

namespace cxr::nn {

namespace {

std::vector<float>& scratch(int slot, size_t n) {
  static thread_local std::vector<float> bufs[3];
  auto& b = bufs[slot];
  if (b.size() < n) b.resize(n);
  return b;
}

void sgemm(bool ta, bool tb, int64_t m, int64_t n, int64_t k, float alpha, const float* a,
           int64_t lda, const float* b, int64_t ldb, float beta, float* c, int64_t ldc) {
  cblas_sgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans, tb ? CblasTrans : CblasNoTrans,
              static_cast<int>(m), static_cast<int>(n), static_cast<int>(k), alpha, a,
              static_cast<int>(lda), b, static_cast<int>(ldb), beta, c, static_cast<int>(ldc));
}

struct ConvGeom {
  int64_t cin, h, w, cout, kh, kw, ho, wo;
  int stride, pad, dilation;
};

// col layout: (cin*kh*kw) x (ho*wo)
void im2col(const float* x, const ConvGeom& g, float* col) {
  const int64_t plane = g.h * g.w;
  const int64_t ocols = g.ho * g.wo;
  for (int64_t c = 0; c < g.cin; ++c) {
    for (int64_t ki = 0; ki < g.kh; ++ki) {
      for (int64_t kj = 0; kj < g.kw; ++kj) {
        float* dst = col + ((c * g.kh + ki) * g.kw + kj) * ocols;
        for (int64_t oy = 0; oy < g.ho; ++oy) {
          const int64_t iy = oy * g.stride - g.pad + ki * g.dilation;
          if (iy < 0 || iy >= g.h) {
            std::memset(dst + oy * g.wo, 0, static_cast<size_t>(g.wo) * sizeof(float));
            continue;
          }
          const float* src_row = x + c * plane + iy * g.w;
          int64_t ox = 0;
          for (; ox < g.wo; ++ox) {
            const int64_t ix = ox * g.stride - g.pad + kj * g.dilation;
            dst[oy * g.wo + ox] = (ix >= 0 && ix < g.w) ? src_row[ix] : 0.0f;
          }
        }
      }
    }
  }
}

void col2im_add(const float* col, const ConvGeom& g, float* x) {
  const int64_t plane = g.h * g.w;
  const int64_t ocols = g.ho * g.wo;
  for (int64_t c = 0; c < g.cin; ++c) {
    for (int64_t ki = 0; ki < g.kh; ++ki) {
      for (int64_t kj = 0; kj < g.kw; ++kj) {
        const float* src = col + ((c * g.kh + ki) * g.kw + kj) * ocols;
        for (int64_t oy = 0; oy < g.ho; ++oy) {
          const int64_t iy = oy * g.stride - g.pad + ki * g.dilation;
          if (iy < 0 || iy >= g.h) continue;
          float* dst_row = x + c * plane + iy * g.w;
          for (int64_t ox = 0; ox < g.wo; ++ox) {
            const int64_t ix = ox * g.stride - g.pad + kj * g.dilation;
            if (ix >= 0 && ix < g.w) dst_row[ix] += src[oy * g.wo + ox];
          }
        }
      }
    }
  }
}

void check_4d(const Var& x, const char* who) {
  require(x && x->value.ndim() == 4, Err::contract, std::string(who) + ": expected NCHW input");
}

}  // namespace

int64_t conv_out_size(int64_t in, int k, int stride, int pad, int dilation) {
  return (in + 2 * pad - dilation * (static_cast<int64_t>(k) - 1) - 1) / stride + 1;
}

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad, int dilation) {
  check_4d(x, "conv2d");
  require(w && w->value.ndim() == 4, Err::contract, "conv2d: weight must be (Cout,Cin,kh,kw)");
  const auto& xs = x->value.shape();
  const auto& ws = w->value.shape();
  require(xs[1] == ws[1], Err::contract,
          "conv2d: input channels " + std::to_string(xs[1]) + " != weight channels " +
              std::to_string(ws[1]));
  ConvGeom g{xs[1], xs[2],  xs[3],  ws[0],
             ws[2], ws[3],  0,      0,
             stride, pad,   dilation};
  g.ho = conv_out_size(g.h, static_cast<int>(g.kh), stride, pad, dilation);
  g.wo = conv_out_size(g.w, static_cast<int>(g.kw), stride, pad, dilation);
  require(g.ho > 0 && g.wo > 0, Err::contract, "conv2d: empty output");

  const int64_t n = xs[0];
  const int64_t kdim = g.cin * g.kh * g.kw;
  const int64_t ocols = g.ho * g.wo;
  Tensor out({n, g.cout, g.ho, g.wo});

  {
    auto& col = scratch(0, static_cast<size_t>(kdim * ocols));
    for (int64_t i = 0; i < n; ++i) {
      im2col(x->value.data() + i * g.cin * g.h * g.w, g, col.data());
      sgemm(false, false, g.cout, ocols, kdim, 1.0f, w->value.data(), kdim, col.data(), ocols,
            0.0f, out.data() + i * g.cout * ocols, ocols);
    }
  }
  if (b) {
    require(b->value.numel() == g.cout, Err::contract, "conv2d: bias size mismatch");
    for (int64_t i = 0; i < n; ++i)
      for (int64_t c = 0; c < g.cout; ++c) {
        float* o = out.data() + (i * g.cout + c) * ocols;
        const float bv = b->value[c];
        for (int64_t j = 0; j < ocols; ++j) o[j] += bv;
      }
  }

  return make_op(std::move(out), {x, w, b}, [g, n, kdim, ocols](Node& node) {
    const Var& x = node.parents[0];
    const Var& w = node.parents[1];
    const Var& b = node.parents[2];
    const float* dout = node.grad.data();
    if (b && b->requires_grad) {
      float* db = b->ensure_grad().data();
      for (int64_t i = 0; i < n; ++i)
        for (int64_t c = 0; c < g.cout; ++c) {
          const float* o = dout + (i * g.cout + c) * ocols;
          double s = 0;
          for (int64_t j = 0; j < ocols; ++j) s += o[j];
          db[c] += static_cast<float>(s);
        }
    }
    const bool need_dx = x->requires_grad;
    const bool need_dw = w->requires_grad;
    if (!need_dx && !need_dw) return;
    auto& col = scratch(0, static_cast<size_t>(kdim * ocols));
    auto& dcol = scratch(1, static_cast<size_t>(kdim * ocols));
    float* dw = need_dw ? w->ensure_grad().data() : nullptr;
    float* dx = need_dx ? x->ensure_grad().data() : nullptr;
    for (int64_t i = 0; i < n; ++i) {
      const float* dout_i = dout + i * g.cout * ocols;
      if (need_dw) {
        im2col(x->value.data() + i * g.cin * g.h * g.w, g, col.data());
        sgemm(false, true, g.cout, kdim, ocols, 1.0f, dout_i, ocols, col.data(), ocols, 1.0f, dw,
              kdim);
      }
      if (need_dx) {
        sgemm(true, false, kdim, ocols, g.cout, 1.0f, w->value.data(), kdim, dout_i, ocols, 0.0f,
              dcol.data(), ocols);
        col2im_add(dcol.data(), g, dx + i * g.cin * g.h * g.w);
      }
    }
  });
}

Var conv_transpose2d(const Var& x, const Var& w, const Var& b, int stride, int pad,
                     int output_padding) {
  check_4d(x, "conv_transpose2d");
  require(w && w->value.ndim() == 4, Err::contract,
          "conv_transpose2d: weight must be (Cin,Cout,kh,kw)");
  require(output_padding >= 0 && output_padding < stride, Err::contract,
          "conv_transpose2d: output_padding must be in [0, stride)");
  const auto& xs = x->value.shape();
  const auto& ws = w->value.shape();
  require(xs[1] == ws[0], Err::contract, "conv_transpose2d: channel mismatch");
  const int64_t n = xs[0], cin = xs[1], h = xs[2], wd = xs[3];
  const int64_t cout = ws[1], kh = ws[2], kw = ws[3];
  const int64_t ho = (h - 1) * stride - 2 * pad + kh + output_padding;
  const int64_t wo = (wd - 1) * stride - 2 * pad + kw + output_padding;
  require(ho > 0 && wo > 0, Err::contract, "conv_transpose2d: empty output");

  // Geometry of the matching forward conv on the *output* tensor.
  ConvGeom g{cout, ho, wo, cin, kh, kw, h, wd, stride, pad, 1};
  const int64_t kdim = cout * kh * kw;
  const int64_t icols = h * wd;
  Tensor out({n, cout, ho, wo});

  {
    auto& col = scratch(0, static_cast<size_t>(kdim * icols));
    for (int64_t i = 0; i < n; ++i) {
      // col = W^T (kdim x cin) * x_i (cin x icols)
      sgemm(true, false, kdim, icols, cin, 1.0f, w->value.data(), kdim,
            x->value.data() + i * cin * icols, icols, 0.0f, col.data(), icols);
      col2im_add(col.data(), g, out.data() + i * cout * ho * wo);
    }
  }
  if (b) {
    require(b->value.numel() == cout, Err::contract, "conv_transpose2d: bias size mismatch");
    const int64_t plane = ho * wo;
    for (int64_t i = 0; i < n; ++i)
      for (int64_t c = 0; c < cout; ++c) {
        float* o = out.data() + (i * cout + c) * plane;
        const float bv = b->value[c];
        for (int64_t j = 0; j < plane; ++j) o[j] += bv;
      }
  }

  return make_op(std::move(out), {x, w, b},
                 [g, n, cin, cout, kdim, icols, ho, wo](Node& node) {
    const Var& x = node.parents[0];
    const Var& w = node.parents[1];
    const Var& b = node.parents[2];
    const float* dout = node.grad.data();
    const int64_t plane = ho * wo;
    if (b && b->requires_grad) {
      float* db = b->ensure_grad().data();
      for (int64_t i = 0; i < n; ++i)
        for (int64_t c = 0; c < cout; ++c) {
          const float* o = dout + (i * cout + c) * plane;
          double s = 0;
          for (int64_t j = 0; j < plane; ++j) s += o[j];
          db[c] += static_cast<float>(s);
        }
    }
    const bool need_dx = x->requires_grad;
    const bool need_dw = w->requires_grad;
    if (!need_dx && !need_dw) return;
    auto& dcol = scratch(0, static_cast<size_t>(kdim * icols));
    float* dx = need_dx ? x->ensure_grad().data() : nullptr;
    float* dw = need_dw ? w->ensure_grad().data() : nullptr;
    for (int64_t i = 0; i < n; ++i) {
      im2col(dout + i * cout * plane, g, dcol.data());
      if (need_dx)
        sgemm(false, false, cin, icols, kdim, 1.0f, w->value.data(), kdim, dcol.data(), icols,
              1.0f, dx + i * cin * icols, icols);
      if (need_dw)
        sgemm(false, true, cin, kdim, icols, 1.0f, x->value.data() + i * cin * icols, icols,
              dcol.data(), icols, 1.0f, dw, kdim);
    }
  });
}

Var maxpool2d(const Var& x, int k, int stride) {
  check_4d(x, "maxpool2d");
  const auto& xs = x->value.shape();
  const int64_t n = xs[0], c = xs[1], h = xs[2], w = xs[3];
  const int64_t ho = (h - k) / stride + 1;
  const int64_t wo = (w - k) / stride + 1;
  require(ho > 0 && wo > 0, Err::contract, "maxpool2d: empty output");

  Tensor out({n, c, ho, wo});
  auto argmax = std::make_shared<std::vector<int32_t>>(static_cast<size_t>(n * c * ho * wo));
  const float* xd = x->value.data();
  float* od = out.data();
  for (int64_t i = 0; i < n * c; ++i) {
    const float* plane = xd + i * h * w;
    for (int64_t oy = 0; oy < ho; ++oy)
      for (int64_t ox = 0; ox < wo; ++ox) {
        int64_t best = (oy * stride) * w + ox * stride;
        float bv = plane[best];
        for (int64_t ki = 0; ki < k; ++ki)
          for (int64_t kj = 0; kj < k; ++kj) {
            const int64_t idx = (oy * stride + ki) * w + ox * stride + kj;
            if (plane[idx] > bv) {
              bv = plane[idx];
              best = idx;
            }
          }
        const int64_t o = (i * ho + oy) * wo + ox;
        od[o] = bv;
        (*argmax)[static_cast<size_t>(o)] = static_cast<int32_t>(best);
      }
  }

  return make_op(std::move(out), {x}, [argmax, n, c, h, w, ho, wo](Node& node) {
    const Var& x = node.parents[0];
    if (!x->requires_grad) return;
    float* dx = x->ensure_grad().data();
    const float* dout = node.grad.data();
    for (int64_t i = 0; i < n * c; ++i) {
      float* dplane = dx + i * h * w;
      const float* dop = dout + i * ho * wo;
      const int32_t* am = argmax->data() + i * ho * wo;
      for (int64_t j = 0; j < ho * wo; ++j) dplane[am[j]] += dop[j];
    }
  });
}

Var relu(const Var& x) {
  Tensor out(x->value.shape());
  const int64_t n = x->value.numel();
  const float* xd = x->value.data();
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i) od[i] = xd[i] > 0.0f ? xd[i] : 0.0f;
  return make_op(std::move(out), {x}, [n](Node& node) {
    const Var& x = node.parents[0];
    if (!x->requires_grad) return;
    float* dx = x->ensure_grad().data();
    const float* xd = x->value.data();
    const float* dy = node.grad.data();
    for (int64_t i = 0; i < n; ++i)
      if (xd[i] > 0.0f) dx[i] += dy[i];
  });
}

Var sigmoid(const Var& x) {
  Tensor out(x->value.shape());
  const int64_t n = x->value.numel();
  const float* xd = x->value.data();
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i) od[i] = 1.0f / (1.0f + std::exp(-xd[i]));
  return make_op(std::move(out), {x}, [n](Node& node) {
    const Var& x = node.parents[0];
    if (!x->requires_grad) return;
    float* dx = x->ensure_grad().data();
    const float* y = node.value.data();
    const float* dy = node.grad.data();
    for (int64_t i = 0; i < n; ++i) dx[i] += dy[i] * y[i] * (1.0f - y[i]);
  });
}

Var add(const Var& a, const Var& b) {
  require(a->value.same_shape(b->value), Err::contract, "add: shape mismatch");
  Tensor out(a->value.shape());
  const int64_t n = out.numel();
  const float* ad = a->value.data();
  const float* bd = b->value.data();
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i) od[i] = ad[i] + bd[i];
  return make_op(std::move(out), {a, b}, [n](Node& node) {
    const float* dy = node.grad.data();
    for (int p = 0; p < 2; ++p) {
      const Var& v = node.parents[p];
      if (!v->requires_grad) continue;
      float* d = v->ensure_grad().data();
      for (int64_t i = 0; i < n; ++i) d[i] += dy[i];
    }
  });
}

Var concat_channels(const std::vector<Var>& xs) {
  require(!xs.empty(), Err::contract, "concat: no inputs");
  const auto& s0 = xs[0]->value.shape();
  int64_t ctotal = 0;
  for (const auto& v : xs) {
    check_4d(v, "concat");
    const auto& s = v->value.shape();
    require(s[0] == s0[0] && s[2] == s0[2] && s[3] == s0[3], Err::contract,
            "concat: spatial/batch mismatch");
    ctotal += s[1];
  }
  const int64_t n = s0[0], h = s0[2], w = s0[3], plane = h * w;
  Tensor out({n, ctotal, h, w});
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i) {
    int64_t coff = 0;
    for (const auto& v : xs) {
      const int64_t ci = v->value.dim(1);
      std::memcpy(od + (i * ctotal + coff) * plane, v->value.data() + i * ci * plane,
                  static_cast<size_t>(ci * plane) * sizeof(float));
      coff += ci;
    }
  }
  std::vector<Var> parents(xs.begin(), xs.end());
  return make_op(std::move(out), std::move(parents), [n, ctotal, plane](Node& node) {
    const float* dy = node.grad.data();
    for (int64_t i = 0; i < n; ++i) {
      int64_t coff = 0;
      for (const auto& v : node.parents) {
        const int64_t ci = v->value.dim(1);
        if (v->requires_grad) {
          float* d = v->ensure_grad().data() + i * ci * plane;
          const float* s = dy + (i * ctotal + coff) * plane;
          for (int64_t j = 0; j < ci * plane; ++j) d[j] += s[j];
        }
        coff += ci;
      }
    }
  });
}

Var dropout(const Var& x, double p, bool training, uint64_t seed) {
  require(p >= 0.0 && p < 1.0, Err::contract, "dropout: p must be in [0,1)");
  if (!training || p == 0.0) return x;
  const int64_t n = x->value.numel();
  auto mask = std::make_shared<std::vector<float>>(static_cast<size_t>(n));
  Rng rng(seed);
  const float keep = static_cast<float>(1.0 - p);
  const float inv_keep = 1.0f / keep;
  for (int64_t i = 0; i < n; ++i)
    (*mask)[static_cast<size_t>(i)] = rng.uniform_f(0.0f, 1.0f) < keep ? inv_keep : 0.0f;
  Tensor out(x->value.shape());
  const float* xd = x->value.data();
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i) od[i] = xd[i] * (*mask)[static_cast<size_t>(i)];
  return make_op(std::move(out), {x}, [mask, n](Node& node) {
    const Var& x = node.parents[0];
    if (!x->requires_grad) return;
    float* dx = x->ensure_grad().data();
    const float* dy = node.grad.data();
    for (int64_t i = 0; i < n; ++i) dx[i] += dy[i] * (*mask)[static_cast<size_t>(i)];
  });
}

Var batch_norm2d(const Var& x, const Var& gamma, const Var& beta, Tensor& running_mean,
                 Tensor& running_var, bool training, double momentum, double eps) {
  check_4d(x, "batch_norm2d");
  const auto& xs = x->value.shape();
  const int64_t n = xs[0], c = xs[1], plane = xs[2] * xs[3];
  require(gamma->value.numel() == c && beta->value.numel() == c &&
              running_mean.numel() == c && running_var.numel() == c,
          Err::contract, "batch_norm2d: channel mismatch");

  auto mean = std::make_shared<std::vector<float>>(static_cast<size_t>(c));
  auto invstd = std::make_shared<std::vector<float>>(static_cast<size_t>(c));
  const int64_t ns = n * plane;
  const float* xd = x->value.data();

  if (training) {
    for (int64_t ch = 0; ch < c; ++ch) {
      double sum = 0, sq = 0;
      for (int64_t i = 0; i < n; ++i) {
        const float* p = xd + (i * c + ch) * plane;
        for (int64_t j = 0; j < plane; ++j) {
          sum += p[j];
          sq += static_cast<double>(p[j]) * p[j];
        }
      }
      const double mu = sum / ns;
      const double var = sq / ns - mu * mu;  // biased
      (*mean)[ch] = static_cast<float>(mu);
      (*invstd)[ch] = static_cast<float>(1.0 / std::sqrt(var + eps));
      const double unbiased = ns > 1 ? var * ns / (ns - 1) : var;
      running_mean[ch] = static_cast<float>((1 - momentum) * running_mean[ch] + momentum * mu);
      running_var[ch] = static_cast<float>((1 - momentum) * running_var[ch] + momentum * unbiased);
    }
  } else {
    for (int64_t ch = 0; ch < c; ++ch) {
      (*mean)[ch] = running_mean[ch];
      (*invstd)[ch] = static_cast<float>(1.0 / std::sqrt(running_var[ch] + eps));
    }
  }

  Tensor out(x->value.shape());
  float* od = out.data();
  for (int64_t i = 0; i < n; ++i)
    for (int64_t ch = 0; ch < c; ++ch) {
      const float* p = xd + (i * c + ch) * plane;
      float* o = od + (i * c + ch) * plane;
      const float mu = (*mean)[ch], is = (*invstd)[ch];
      const float gg = gamma->value[ch], bb = beta->value[ch];
      for (int64_t j = 0; j < plane; ++j) o[j] = (p[j] - mu) * is * gg + bb;
    }

  return make_op(std::move(out), {x, gamma, beta},
                 [mean, invstd, training, n, c, plane](Node& node) {
    const Var& x = node.parents[0];
    const Var& gamma = node.parents[1];
    const Var& beta = node.parents[2];
    const float* xd = x->value.data();
    const float* dy = node.grad.data();
    const int64_t ns = n * plane;

    for (int64_t ch = 0; ch < c; ++ch) {
      const float mu = (*mean)[ch], is = (*invstd)[ch];
      double sum_dy = 0, sum_dy_xhat = 0;
      for (int64_t i = 0; i < n; ++i) {
        const float* p = xd + (i * c + ch) * plane;
        const float* d = dy + (i * c + ch) * plane;
        for (int64_t j = 0; j < plane; ++j) {
          sum_dy += d[j];
          sum_dy_xhat += static_cast<double>(d[j]) * (p[j] - mu) * is;
        }
      }
      if (gamma->requires_grad) gamma->ensure_grad()[ch] += static_cast<float>(sum_dy_xhat);
      if (beta->requires_grad) beta->ensure_grad()[ch] += static_cast<float>(sum_dy);
      if (!x->requires_grad) continue;
      float* dx = x->ensure_grad().data();
      const float gg = gamma->value[ch];
      if (training) {
        const float m_dy = static_cast<float>(sum_dy / ns);
        const float m_dy_xhat = static_cast<float>(sum_dy_xhat / ns);
        for (int64_t i = 0; i < n; ++i) {
          const float* p = xd + (i * c + ch) * plane;
          const float* d = dy + (i * c + ch) * plane;
          float* g = dx + (i * c + ch) * plane;
          for (int64_t j = 0; j < plane; ++j) {
            const float xhat = (p[j] - mu) * is;
            g[j] += gg * is * (d[j] - m_dy - xhat * m_dy_xhat);
          }
        }
      } else {
        for (int64_t i = 0; i < n; ++i) {
          const float* d = dy + (i * c + ch) * plane;
          float* g = dx + (i * c + ch) * plane;
          for (int64_t j = 0; j < plane; ++j) g[j] += gg * is * d[j];
        }
      }
    }
  });
}

Tensor bilinear_upsample_kernel(int64_t channels, int factor) {
  const int k = 2 * factor;
  const double c = (2.0 * factor - 1) / (2.0 * factor);
  std::vector<double> w1(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    w1[static_cast<size_t>(i)] = 1.0 - std::fabs(static_cast<double>(i) / factor - c);
  Tensor w({channels, channels, k, k});
  for (int64_t ch = 0; ch < channels; ++ch)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        w[((ch * channels + ch) * k + i) * k + j] =
            static_cast<float>(w1[static_cast<size_t>(i)] * w1[static_cast<size_t>(j)]);
  return w;
}

Var upsample_bilinear2d(const Var& x, int factor) {
  check_4d(x, "upsample_bilinear2d");
  require(factor >= 1, Err::contract, "upsample factor must be >= 1");
  if (factor == 1) return x;
  Var w = constant(bilinear_upsample_kernel(x->value.dim(1), factor));
  return conv_transpose2d(x, w, nullptr, factor, factor / 2, 0);
}

}  // namespace cxr::nn
