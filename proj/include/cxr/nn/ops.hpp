#pragma once

#include <vector>

#include "cxr/nn/autograd.hpp"

namespace cxr::nn {

// All spatial ops take NCHW tensors. Convolutions run as im2col + SGEMM,
// looping over the batch so scratch stays bounded.

Var conv2d(const Var& x, const Var& w, const Var& b, int stride, int pad, int dilation = 1);

// w layout (Cin, Cout, kh, kw). out = (H-1)*stride - 2*pad + dilation*(k-1) + 1 + output_padding
Var conv_transpose2d(const Var& x, const Var& w, const Var& b, int stride, int pad,
                     int output_padding = 0);

Var maxpool2d(const Var& x, int k, int stride);

Var relu(const Var& x);
Var sigmoid(const Var& x);
Var add(const Var& a, const Var& b);
Var concat_channels(const std::vector<Var>& xs);
Var dropout(const Var& x, double p, bool training, uint64_t seed);

// Batch norm over (N, H, W) per channel. Training mode uses batch statistics
// and updates the running buffers in place; eval mode reads them.
Var batch_norm2d(const Var& x, const Var& gamma, const Var& beta, Tensor& running_mean,
                 Tensor& running_var, bool training, double momentum = 0.1, double eps = 1e-5);

// Fixed (non-learned) bilinear upsampling by an integer factor, expressed as
// a transposed convolution with the classic interpolation kernel.
Var upsample_bilinear2d(const Var& x, int factor);

// Diagonal bilinear kernel of shape (C, C, 2f, 2f); used by upsample_bilinear2d.
Tensor bilinear_upsample_kernel(int64_t channels, int factor);

// Reference helpers shared with tests.
int64_t conv_out_size(int64_t in, int k, int stride, int pad, int dilation);

}  // namespace cxr::nn
