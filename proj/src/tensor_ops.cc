// cbmdiar/tensor_ops.cc
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

#include "cbmdiar/tensor_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace cbmdiar {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

double StableSigmoid(double x) {
  if (x >= 0) {
    double z = std::exp(-x);
    return 1.0 / (1.0 + z);
  }
  double z = std::exp(x);
  return z / (1.0 + z);
}

void CheckSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.SameShape(b))
    throw ContractError(StrCat(op, ": incompatible shapes ", a.ShapeString(),
                               " vs ", b.ShapeString()));
}

int64_t LastDim(const Tensor& x) {
  if (x.Rank() == 0)
    throw ContractError("operation requires rank >= 1");
  return x.Shape().back();
}

// Unary elementwise helper. dydx receives (x_i, y_i).
template <typename F, typename G>
Tensor UnaryOp(Tape* tape, const Tensor& x, F&& f, G&& dydx) {
  Tensor y(x.Shape());
  const double* xv = x.Data();
  double* yv = y.Data();
  const int64_t n = x.NumElements();
  for (int64_t i = 0; i < n; ++i) yv[i] = f(xv[i]);
  if (tape) {
    tape->Record([x, y, dydx]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      const double* xv = x.Data();
      const double* yv = y.Data();
      const int64_t n = x.NumElements();
      for (int64_t i = 0; i < n; ++i) gx[i] += go[i] * dydx(xv[i], yv[i]);
    });
  }
  return y;
}

enum class BinKind { kAdd, kSub, kMul };

Tensor BinaryOp(Tape* tape, const Tensor& a, const Tensor& b, BinKind kind) {
  const bool a_scalar = a.NumElements() == 1 && !a.SameShape(b);
  const bool b_scalar = b.NumElements() == 1 && !b.SameShape(a);
  if (!a.SameShape(b) && !a_scalar && !b_scalar)
    throw ContractError(StrCat("elementwise op: incompatible shapes ",
                               a.ShapeString(), " vs ", b.ShapeString()));
  const Tensor& big = a_scalar ? b : a;
  Tensor y(big.Shape());
  const int64_t n = y.NumElements();
  const double* av = a.Data();
  const double* bv = b.Data();
  double* yv = y.Data();
  for (int64_t i = 0; i < n; ++i) {
    const double x1 = a_scalar ? av[0] : av[i];
    const double x2 = b_scalar ? bv[0] : bv[i];
    switch (kind) {
      case BinKind::kAdd: yv[i] = x1 + x2; break;
      case BinKind::kSub: yv[i] = x1 - x2; break;
      case BinKind::kMul: yv[i] = x1 * x2; break;
    }
  }
  if (tape) {
    tape->Record([a, b, y, kind, a_scalar, b_scalar]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      const int64_t n = y.NumElements();
      double* ga = a.GradData();
      double* gb = b.GradData();
      const double* av = a.Data();
      const double* bv = b.Data();
      for (int64_t i = 0; i < n; ++i) {
        double da = 0, db = 0;
        switch (kind) {
          case BinKind::kAdd: da = go[i]; db = go[i]; break;
          case BinKind::kSub: da = go[i]; db = -go[i]; break;
          case BinKind::kMul:
            da = go[i] * (b_scalar ? bv[0] : bv[i]);
            db = go[i] * (a_scalar ? av[0] : av[i]);
            break;
        }
        ga[a_scalar ? 0 : i] += da;
        gb[b_scalar ? 0 : i] += db;
      }
    });
  }
  return y;
}

}  // namespace

Tensor MatMul(Tape* tape, const Tensor& a, const Tensor& b) {
  if (a.Rank() != 2 || b.Rank() != 2)
    throw ContractError(StrCat("matmul requires rank-2 operands, got ",
                               a.ShapeString(), " and ", b.ShapeString()));
  if (a.Dim(1) != b.Dim(0))
    throw ContractError(StrCat("matmul: inner dimensions disagree, ",
                               a.ShapeString(), " vs ", b.ShapeString()));
  const int64_t m = a.Dim(0), k = a.Dim(1), n = b.Dim(1);
  Tensor y({m, n});
  {
    ConstMap am(a.Data(), m, k), bm(b.Data(), k, n);
    MutMap ym(y.Data(), m, n);
    ym.noalias() = am * bm;
  }
  if (tape) {
    tape->Record([a, b, y, m, k, n]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      ConstMap am(a.Data(), m, k), bm(b.Data(), k, n), gy(go, m, n);
      MutMap ga(a.GradData(), m, k);
      MutMap gb(b.GradData(), k, n);
      ga.noalias() += gy * bm.transpose();
      gb.noalias() += am.transpose() * gy;
    });
  }
  return y;
}

Tensor AddBias(Tape* tape, const Tensor& x, const Tensor& b) {
  if (b.Rank() != 1 || LastDim(x) != b.Dim(0))
    throw ContractError(StrCat("bias shape ", b.ShapeString(),
                               " does not match input ", x.ShapeString()));
  const int64_t d = b.Dim(0);
  const int64_t rows = x.NumElements() / d;
  Tensor y(x.Shape());
  const double* xv = x.Data();
  const double* bv = b.Data();
  double* yv = y.Data();
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t c = 0; c < d; ++c) yv[r * d + c] = xv[r * d + c] + bv[c];
  if (tape) {
    tape->Record([x, b, y, rows, d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      double* gb = b.GradData();
      for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < d; ++c) {
          gx[r * d + c] += go[r * d + c];
          gb[c] += go[r * d + c];
        }
    });
  }
  return y;
}

Tensor LinearForward(Tape* tape, const Tensor& x, const Tensor& w,
                     const Tensor& b) {
  Tensor y = MatMul(tape, x, w);
  if (b.Defined()) y = AddBias(tape, y, b);
  return y;
}

Tensor Add(Tape* tape, const Tensor& a, const Tensor& b) {
  return BinaryOp(tape, a, b, BinKind::kAdd);
}
Tensor Sub(Tape* tape, const Tensor& a, const Tensor& b) {
  return BinaryOp(tape, a, b, BinKind::kSub);
}
Tensor Mul(Tape* tape, const Tensor& a, const Tensor& b) {
  return BinaryOp(tape, a, b, BinKind::kMul);
}

Tensor AffineConst(Tape* tape, const Tensor& x, double a, double b) {
  return UnaryOp(
      tape, x, [a, b](double v) { return a * v + b; },
      [a](double, double) { return a; });
}

Tensor Sigmoid(Tape* tape, const Tensor& x) {
  return UnaryOp(
      tape, x, [](double v) { return StableSigmoid(v); },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor Relu(Tape* tape, const Tensor& x) {
  return UnaryOp(
      tape, x, [](double v) { return v > 0 ? v : 0.0; },
      [](double v, double) { return v > 0 ? 1.0 : 0.0; });
}

Tensor Silu(Tape* tape, const Tensor& x) {
  return UnaryOp(
      tape, x, [](double v) { return v * StableSigmoid(v); },
      [](double v, double) {
        const double s = StableSigmoid(v);
        return s * (1.0 + v * (1.0 - s));
      });
}

Tensor Softplus(Tape* tape, const Tensor& x) {
  return UnaryOp(
      tape, x,
      [](double v) { return v > 30.0 ? v : std::log1p(std::exp(v)); },
      [](double v, double) { return StableSigmoid(v); });
}

Tensor Exp(Tape* tape, const Tensor& x) {
  return UnaryOp(
      tape, x, [](double v) { return std::exp(v); },
      [](double, double y) { return y; });
}

Tensor Neg(Tape* tape, const Tensor& x) { return AffineConst(tape, x, -1, 0); }

Tensor Glu(Tape* tape, const Tensor& x) {
  const int64_t two_d = LastDim(x);
  if (two_d % 2 != 0)
    throw ContractError(StrCat("glu requires an even last axis, got ",
                               x.ShapeString()));
  const int64_t d = two_d / 2;
  const int64_t rows = x.NumElements() / two_d;
  std::vector<int64_t> shape = x.Shape();
  shape.back() = d;
  Tensor y(shape);
  const double* xv = x.Data();
  double* yv = y.Data();
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t c = 0; c < d; ++c)
      yv[r * d + c] =
          xv[r * two_d + c] * StableSigmoid(xv[r * two_d + d + c]);
  if (tape) {
    tape->Record([x, y, rows, d, two_d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      const double* xv = x.Data();
      for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < d; ++c) {
          const double av = xv[r * two_d + c];
          const double s = StableSigmoid(xv[r * two_d + d + c]);
          const double g = go[r * d + c];
          gx[r * two_d + c] += g * s;
          gx[r * two_d + d + c] += g * av * s * (1.0 - s);
        }
    });
  }
  return y;
}

Tensor PowConst(Tape* tape, const Tensor& x, double p) {
  if (p < 0) throw ContractError("PowConst requires p >= 0");
  return UnaryOp(
      tape, x, [p](double v) { return std::pow(v, p); },
      [p](double v, double) {
        if (p == 0.0) return 0.0;
        if (v == 0.0 && p < 1.0) return 0.0;
        return p * std::pow(v, p - 1.0);
      });
}

Tensor LogClamped(Tape* tape, const Tensor& x, double floor) {
  return UnaryOp(
      tape, x, [floor](double v) { return std::log(std::max(v, floor)); },
      [floor](double v, double) { return v > floor ? 1.0 / v : 0.0; });
}

Tensor Softmax(Tape* tape, const Tensor& x) {
  const int64_t d = LastDim(x);
  const int64_t rows = x.NumElements() / d;
  Tensor y(x.Shape());
  const double* xv = x.Data();
  double* yv = y.Data();
  const double ninf = -std::numeric_limits<double>::infinity();
  for (int64_t r = 0; r < rows; ++r) {
    const double* row = xv + r * d;
    double mx = ninf;
    for (int64_t c = 0; c < d; ++c) mx = std::max(mx, row[c]);
    if (mx == ninf)
      throw DegenerateInputError("softmax: all entries are -inf");
    double sum = 0;
    for (int64_t c = 0; c < d; ++c) {
      const double e = row[c] == ninf ? 0.0 : std::exp(row[c] - mx);
      yv[r * d + c] = e;
      sum += e;
    }
    for (int64_t c = 0; c < d; ++c) yv[r * d + c] /= sum;
  }
  if (tape) {
    tape->Record([x, y, rows, d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      const double* yv = y.Data();
      for (int64_t r = 0; r < rows; ++r) {
        double dot = 0;
        for (int64_t c = 0; c < d; ++c) dot += go[r * d + c] * yv[r * d + c];
        for (int64_t c = 0; c < d; ++c)
          gx[r * d + c] += yv[r * d + c] * (go[r * d + c] - dot);
      }
    });
  }
  return y;
}

Tensor LayerNormForward(Tape* tape, const Tensor& x, const Tensor& gain,
                        const Tensor& bias, double eps) {
  const int64_t d = LastDim(x);
  if (gain.NumElements() != d || bias.NumElements() != d)
    throw ContractError(StrCat("layer_norm: gain/bias must have length ", d));
  if (eps <= 0) throw ContractError("layer_norm: eps must be positive");
  const int64_t rows = x.NumElements() / d;
  Tensor y(x.Shape());
  // xhat and the inverse stddev are needed again in backward.
  auto xhat = std::make_shared<std::vector<double>>(x.NumElements());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  const double* xv = x.Data();
  const double* gv = gain.Data();
  const double* bv = bias.Data();
  double* yv = y.Data();
  for (int64_t r = 0; r < rows; ++r) {
    const double* row = xv + r * d;
    double mean = 0;
    for (int64_t c = 0; c < d; ++c) mean += row[c];
    mean /= static_cast<double>(d);
    double var = 0;
    for (int64_t c = 0; c < d; ++c) {
      const double z = row[c] - mean;
      var += z * z;
    }
    var /= static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = inv;
    for (int64_t c = 0; c < d; ++c) {
      const double h = (row[c] - mean) * inv;
      (*xhat)[r * d + c] = h;
      yv[r * d + c] = h * gv[c] + bv[c];
    }
  }
  if (tape) {
    tape->Record([x, gain, bias, y, xhat, inv_std, rows, d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      double* gg = gain.GradData();
      double* gb = bias.GradData();
      const double* gv = gain.Data();
      for (int64_t r = 0; r < rows; ++r) {
        double mean_gh = 0, mean_ghh = 0;
        for (int64_t c = 0; c < d; ++c) {
          const double gh = go[r * d + c] * gv[c];
          const double h = (*xhat)[r * d + c];
          mean_gh += gh;
          mean_ghh += gh * h;
          gg[c] += go[r * d + c] * h;
          gb[c] += go[r * d + c];
        }
        mean_gh /= static_cast<double>(d);
        mean_ghh /= static_cast<double>(d);
        const double inv = (*inv_std)[r];
        for (int64_t c = 0; c < d; ++c) {
          const double gh = go[r * d + c] * gv[c];
          const double h = (*xhat)[r * d + c];
          gx[r * d + c] += inv * (gh - mean_gh - h * mean_ghh);
        }
      }
    });
  }
  return y;
}

Tensor DepthwiseConv1d(Tape* tape, const Tensor& x, const Tensor& kernel) {
  if (x.Rank() != 2 || kernel.Rank() != 2)
    throw ContractError("depthwise_conv1d requires rank-2 input and kernel");
  const int64_t t_len = x.Dim(0), d = x.Dim(1), k = kernel.Dim(0);
  if (kernel.Dim(1) != d)
    throw ContractError(StrCat("depthwise_conv1d: kernel channels ",
                               kernel.ShapeString(), " vs input ",
                               x.ShapeString()));
  if (k % 2 == 0)
    throw ConfigError(StrCat("depthwise_conv1d requires an odd kernel width, got ", k));
  const int64_t half = (k - 1) / 2;
  Tensor y({t_len, d});
  const double* xv = x.Data();
  const double* kv = kernel.Data();
  double* yv = y.Data();
  for (int64_t t = 0; t < t_len; ++t)
    for (int64_t j = 0; j < k; ++j) {
      const int64_t src = t + j - half;
      if (src < 0 || src >= t_len) continue;
      const double* xr = xv + src * d;
      const double* kr = kv + j * d;
      double* yr = yv + t * d;
      for (int64_t c = 0; c < d; ++c) yr[c] += kr[c] * xr[c];
    }
  if (tape) {
    tape->Record([x, kernel, y, t_len, d, k, half]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      double* gk = kernel.GradData();
      const double* xv = x.Data();
      const double* kv = kernel.Data();
      for (int64_t t = 0; t < t_len; ++t)
        for (int64_t j = 0; j < k; ++j) {
          const int64_t src = t + j - half;
          if (src < 0 || src >= t_len) continue;
          const double* gr = go + t * d;
          for (int64_t c = 0; c < d; ++c) {
            gx[src * d + c] += kv[j * d + c] * gr[c];
            gk[j * d + c] += xv[src * d + c] * gr[c];
          }
        }
    });
  }
  return y;
}

Tensor CausalConv1d(Tape* tape, const Tensor& x, const Tensor& kernel,
                    const Tensor& bias) {
  if (x.Rank() != 2 || kernel.Rank() != 2)
    throw ContractError("causal_conv1d requires rank-2 input and kernel");
  const int64_t t_len = x.Dim(0), d = x.Dim(1), k = kernel.Dim(0);
  if (kernel.Dim(1) != d)
    throw ContractError(StrCat("causal_conv1d: kernel channels ",
                               kernel.ShapeString(), " vs input ",
                               x.ShapeString()));
  Tensor y({t_len, d});
  const double* xv = x.Data();
  const double* kv = kernel.Data();
  double* yv = y.Data();
  for (int64_t t = 0; t < t_len; ++t)
    for (int64_t j = 0; j < k; ++j) {
      const int64_t src = t - (k - 1) + j;
      if (src < 0) continue;
      const double* xr = xv + src * d;
      const double* kr = kv + j * d;
      double* yr = yv + t * d;
      for (int64_t c = 0; c < d; ++c) yr[c] += kr[c] * xr[c];
    }
  if (bias.Defined()) return AddBias(tape, RecordCausalBody(), bias);
  return RecordCausalBody();
}

Tensor Dropout(Tape* tape, const Tensor& x, double rate, bool training,
               Rng* rng) {
  if (rate < 0 || rate >= 1)
    throw ConfigError(StrCat("dropout rate must be in [0, 1), got ", rate));
  if (!training || rate == 0.0) return x;
  if (!rng) throw ContractError("dropout in training mode requires an rng");
  const int64_t n = x.NumElements();
  auto mask = std::make_shared<std::vector<uint8_t>>(n);
  const double scale = 1.0 / (1.0 - rate);
  Tensor y(x.Shape());
  const double* xv = x.Data();
  double* yv = y.Data();
  for (int64_t i = 0; i < n; ++i) {
    const bool keep = rng->Uniform() >= rate;
    (*mask)[i] = keep ? 1 : 0;
    yv[i] = keep ? xv[i] * scale : 0.0;
  }
  if (tape) {
    tape->Record([x, y, mask, scale, n]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      for (int64_t i = 0; i < n; ++i)
        if ((*mask)[i]) gx[i] += go[i] * scale;
    });
  }
  return y;
}

Tensor ReverseTime(Tape* tape, const Tensor& x) {
  if (x.Rank() < 1 || x.Rank() > 2)
    throw ContractError("reverse_time supports rank 1 or 2");
  const int64_t t_len = x.Dim(0);
  const int64_t d = x.Rank() == 2 ? x.Dim(1) : 1;
  Tensor y(x.Shape());
  const double* xv = x.Data();
  double* yv = y.Data();
  for (int64_t t = 0; t < t_len; ++t)
    std::copy(xv + (t_len - 1 - t) * d, xv + (t_len - t) * d, yv + t * d);
  if (tape) {
    tape->Record([x, y, t_len, d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      for (int64_t t = 0; t < t_len; ++t)
        for (int64_t c = 0; c < d; ++c)
          gx[(t_len - 1 - t) * d + c] += go[t * d + c];
    });
  }
  return y;
}

Tensor SliceRows(Tape* tape, const Tensor& x, int64_t r0, int64_t r1) {
  if (x.Rank() < 1 || x.Rank() > 2)
    throw ContractError("slice_rows supports rank 1 or 2");
  const int64_t t_len = x.Dim(0);
  if (r0 < 0 || r1 > t_len || r0 >= r1)
    throw ContractError(StrCat("slice_rows: bad range [", r0, ", ", r1,
                               ") for ", x.ShapeString()));
  const int64_t d = x.Rank() == 2 ? x.Dim(1) : 1;
  std::vector<int64_t> shape = x.Shape();
  shape[0] = r1 - r0;
  Tensor y(shape);
  std::copy(x.Data() + r0 * d, x.Data() + r1 * d, y.Data());
  if (tape) {
    tape->Record([x, y, r0, r1, d]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      const int64_t n = (r1 - r0) * d;
      for (int64_t i = 0; i < n; ++i) gx[r0 * d + i] += go[i];
    });
  }
  return y;
}

Tensor SliceCols(Tape* tape, const Tensor& x, int64_t c0, int64_t c1) {
  if (x.Rank() != 2) throw ContractError("slice_cols requires rank 2");
  const int64_t t_len = x.Dim(0), d = x.Dim(1);
  if (c0 < 0 || c1 > d || c0 >= c1)
    throw ContractError(StrCat("slice_cols: bad range [", c0, ", ", c1,
                               ") for ", x.ShapeString()));
  const int64_t w = c1 - c0;
  Tensor y({t_len, w});
  const double* xv = x.Data();
  double* yv = y.Data();
  for (int64_t t = 0; t < t_len; ++t)
    std::copy(xv + t * d + c0, xv + t * d + c1, yv + t * w);
  if (tape) {
    tape->Record([x, y, t_len, d, c0, w]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      for (int64_t t = 0; t < t_len; ++t)
        for (int64_t c = 0; c < w; ++c)
          gx[t * d + c0 + c] += go[t * w + c];
    });
  }
  return y;
}

Tensor Stack0(Tape* tape, const std::vector<Tensor>& xs) {
  if (xs.empty()) throw ContractError("stack0 of an empty list");
  for (const Tensor& t : xs) CheckSameShape(xs[0], t, "stack0");
  std::vector<int64_t> shape;
  shape.push_back(static_cast<int64_t>(xs.size()));
  for (int64_t d : xs[0].Shape()) shape.push_back(d);
  Tensor y(shape);
  const int64_t per = xs[0].NumElements();
  for (size_t i = 0; i < xs.size(); ++i)
    std::copy(xs[i].Data(), xs[i].Data() + per, y.Data() + i * per);
  if (tape) {
    tape->Record([xs, y, per]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      for (size_t i = 0; i < xs.size(); ++i) {
        double* gx = xs[i].GradData();
        for (int64_t k = 0; k < per; ++k) gx[k] += go[i * per + k];
      }
    });
  }
  return y;
}

Tensor LinComb(Tape* tape, const Tensor& w, const std::vector<Tensor>& xs) {
  if (w.Rank() != 1 || w.Dim(0) != static_cast<int64_t>(xs.size()))
    throw ContractError(StrCat("lincomb: weight shape ", w.ShapeString(),
                               " vs ", xs.size(), " tensors"));
  if (xs.empty()) throw ContractError("lincomb of an empty list");
  for (const Tensor& t : xs) CheckSameShape(xs[0], t, "lincomb");
  Tensor y(xs[0].Shape());
  const int64_t n = y.NumElements();
  double* yv = y.Data();
  const double* wv = w.Data();
  for (size_t l = 0; l < xs.size(); ++l) {
    const double* xv = xs[l].Data();
    const double wl = wv[l];
    if (wl == 0.0) continue;
    for (int64_t i = 0; i < n; ++i) yv[i] += wl * xv[i];
  }
  if (tape) {
    tape->Record([w, xs, y, n]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gw = w.GradData();
      const double* wv = w.Data();
      for (size_t l = 0; l < xs.size(); ++l) {
        const double* xv = xs[l].Data();
        double* gx = xs[l].GradData();
        double dot = 0;
        for (int64_t i = 0; i < n; ++i) {
          dot += go[i] * xv[i];
          gx[i] += wv[l] * go[i];
        }
        gw[l] += dot;
      }
    });
  }
  return y;
}

Tensor MaskedFillConst(Tape* tape, const Tensor& x,
                       const std::vector<uint8_t>& keep, double fill) {
  if (static_cast<int64_t>(keep.size()) != x.NumElements())
    throw ContractError("masked_fill: mask length does not match tensor");
  Tensor y(x.Shape());
  const double* xv = x.Data();
  double* yv = y.Data();
  const int64_t n = x.NumElements();
  for (int64_t i = 0; i < n; ++i) yv[i] = keep[i] ? xv[i] : fill;
  if (tape) {
    tape->Record([x, y, keep, n]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      for (int64_t i = 0; i < n; ++i)
        if (keep[i]) gx[i] += go[i];
    });
  }
  return y;
}

Tensor Sum(Tape* tape, const Tensor& x) {
  double s = 0;
  const double* xv = x.Data();
  const int64_t n = x.NumElements();
  for (int64_t i = 0; i < n; ++i) s += xv[i];
  Tensor y = Tensor::Scalar(s);
  if (tape) {
    tape->Record([x, y, n]() mutable {
      const double* go = y.GradDataIfPresent();
      if (!go) return;
      double* gx = x.GradData();
      for (int64_t i = 0; i < n; ++i) gx[i] += go[0];
    });
  }
  return y;
}

Tensor Mean(Tape* tape, const Tensor& x) {
  return Scale(tape, Sum(tape, x), 1.0 / static_cast<double>(x.NumElements()));
}

}  // namespace cbmdiar
