// cbmdiar/tensor_ops.h
//
// Copyright (c)  2026  cbmdiar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBMDIAR_TENSOR_OPS_H_
#define CBMDIAR_TENSOR_OPS_H_

#include <cstdint>
#include <vector>

#include "cbmdiar/rng.h"
#include "cbmdiar/tensor.h"

namespace cbmdiar {

// Every op is pure: inputs are never mutated and the output owns fresh
// storage. When `tape` is non-null a backward step is recorded; passing
// nullptr runs the op in inference mode.

// Strict 2-D matrix product [m x k] * [k x n] -> [m x n].
Tensor MatMul(Tape* tape, const Tensor& a, const Tensor& b);

// x [rows x in] * w [in x out] + b [out] (b may be undefined).
Tensor LinearForward(Tape* tape, const Tensor& x, const Tensor& w,
                     const Tensor& b);

// Row-wise bias add: x [... x d] + b [d].
Tensor AddBias(Tape* tape, const Tensor& x, const Tensor& b);

// Elementwise; shapes must match exactly, or one side may be scalar.
Tensor Add(Tape* tape, const Tensor& a, const Tensor& b);
Tensor Sub(Tape* tape, const Tensor& a, const Tensor& b);
Tensor Mul(Tape* tape, const Tensor& a, const Tensor& b);

// Elementwise a*x + b with constants.
Tensor AffineConst(Tape* tape, const Tensor& x, double a, double b);
inline Tensor Scale(Tape* tape, const Tensor& x, double a) {
  return AffineConst(tape, x, a, 0.0);
}

Tensor Sigmoid(Tape* tape, const Tensor& x);
Tensor Relu(Tape* tape, const Tensor& x);
Tensor Silu(Tape* tape, const Tensor& x);
Tensor Softplus(Tape* tape, const Tensor& x);
Tensor Exp(Tape* tape, const Tensor& x);
Tensor Neg(Tape* tape, const Tensor& x);

// Gated linear unit over the last axis: [... x 2d] -> [... x d],
// out = x[:, :d] * sigmoid(x[:, d:]).
Tensor Glu(Tape* tape, const Tensor& x);

// pow(x, p) with p >= 0; the x == 0, p < 1 corner uses subgradient 0.
Tensor PowConst(Tape* tape, const Tensor& x, double p);

// log(max(x, floor)); gradient is 0 where the clamp is active.
Tensor LogClamped(Tape* tape, const Tensor& x, double floor = 1e-12);

// Softmax over the last axis, numerically stabilized by max-subtraction.
// -inf entries map to exactly 0; a row with no finite entry is an error.
Tensor Softmax(Tape* tape, const Tensor& x);

// Layer normalization over the last axis (population variance) followed by
// the affine transform gain/bias (both [d]).
Tensor LayerNormForward(Tape* tape, const Tensor& x, const Tensor& gain,
                        const Tensor& bias, double eps = 1e-5);

// Depthwise 1-D convolution, x [T x d], kernel [k x d], k odd, zero padding
// of (k-1)/2 on both sides; channel c of the output depends only on channel
// c of the input.
Tensor DepthwiseConv1d(Tape* tape, const Tensor& x, const Tensor& kernel);

// Causal depthwise 1-D convolution (left zero padding of k-1 frames), with
// optional per-channel bias. Tap k-1 reads the current frame.
Tensor CausalConv1d(Tape* tape, const Tensor& x, const Tensor& kernel,
                    const Tensor& bias);

// Inverted dropout; identity when !training or rate == 0.
Tensor Dropout(Tape* tape, const Tensor& x, double rate, bool training,
               Rng* rng);

// Reverses axis 0 (time) of a 1-D or 2-D tensor.
Tensor ReverseTime(Tape* tape, const Tensor& x);

// Rows [r0, r1) of a 2-D tensor (or elements of a 1-D tensor).
Tensor SliceRows(Tape* tape, const Tensor& x, int64_t r0, int64_t r1);
// Columns [c0, c1) of a 2-D tensor.
Tensor SliceCols(Tape* tape, const Tensor& x, int64_t c0, int64_t c1);

// Stacks n same-shape tensors along a new leading axis.
Tensor Stack0(Tape* tape, const std::vector<Tensor>& xs);

// sum_l w[l] * xs[l]; w is 1-D of length xs.size(), all xs share a shape.
Tensor LinComb(Tape* tape, const Tensor& w, const std::vector<Tensor>& xs);

// y_i = mask_i ? x_i : fill. Gradient flows only through kept entries, so
// the output is bit-exactly independent of masked inputs.
Tensor MaskedFillConst(Tape* tape, const Tensor& x,
                       const std::vector<uint8_t>& keep, double fill);

Tensor Sum(Tape* tape, const Tensor& x);
Tensor Mean(Tape* tape, const Tensor& x);

}  // namespace cbmdiar

#endif  // CBMDIAR_TENSOR_OPS_H_
