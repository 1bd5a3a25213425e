// cbmdiar/tensor.h
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

#ifndef CBMDIAR_TENSOR_H_
#define CBMDIAR_TENSOR_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cbmdiar/common.h"

namespace cbmdiar {

// Dense row-major tensor of 64-bit reals with an optional gradient buffer.
// The handle has value semantics; the storage (values + grad) is shared, so
// copies made while building a graph all see the same gradients. Values are
// never mutated by ops; the optimizer's in-place parameter update is the one
// sanctioned exception.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);
  Tensor(std::vector<int64_t> shape, std::vector<double> data);

  static Tensor Zeros(std::vector<int64_t> shape);
  static Tensor Full(std::vector<int64_t> shape, double value);
  static Tensor Scalar(double value);
  static Tensor FromVector(std::vector<double> data);  // 1-D

  const std::vector<int64_t>& Shape() const { return shape_; }
  int Rank() const { return static_cast<int>(shape_.size()); }
  int64_t Dim(int axis) const { return shape_[axis]; }
  int64_t NumElements() const;
  bool Defined() const { return storage_ != nullptr; }

  double* Data();
  const double* Data() const;
  std::vector<double> ToVector() const;

  double Item() const;  // requires NumElements() == 1
  double& operator()(int64_t i);
  double operator()(int64_t i) const;
  double& operator()(int64_t i, int64_t j);
  double operator()(int64_t i, int64_t j) const;
  double& operator()(int64_t i, int64_t j, int64_t k);
  double operator()(int64_t i, int64_t j, int64_t k) const;

  bool RequiresGrad() const;
  void SetRequiresGrad(bool value);

  // Gradient buffer, allocated (zero-filled) on first access.
  double* GradData();
  const double* GradDataIfPresent() const;  // nullptr if never allocated
  bool HasGrad() const;
  std::vector<double> GradToVector() const;  // zeros if never allocated
  void ZeroGrad();

  // Deep copy of the values; fresh storage, no grad, requires_grad preserved.
  Tensor Clone() const;

  std::string ShapeString() const;
  bool SameShape(const Tensor& other) const { return shape_ == other.shape_; }

 private:
  struct Storage {
    std::vector<double> values;
    std::vector<double> grad;  // empty until requested
    bool requires_grad = false;
  };

  std::vector<int64_t> shape_;
  std::shared_ptr<Storage> storage_;
};

// Ordered record of executed operations. Each record is a closure that
// propagates the output gradient of one op to its inputs. Backward() replays
// the records in reverse execution order exactly once and consumes the tape.
// One tape per forward pass; distinct sequences on distinct threads must use
// distinct tapes.
class Tape {
 public:
  void Record(std::function<void()> backward_step);

  // Seeds d(loss)/d(loss) = 1 and runs all recorded steps in reverse order.
  // loss must be a scalar and the tape must be nonempty; the tape is cleared
  // afterwards.
  void Backward(Tensor loss);

  size_t NumRecords() const { return records_.size(); }
  bool Empty() const { return records_.empty(); }
  void Clear() { records_.clear(); }

 private:
  std::vector<std::function<void()>> records_;
};

int64_t ShapeNumElements(const std::vector<int64_t>& shape);
std::string ShapeToString(const std::vector<int64_t>& shape);

}  // namespace cbmdiar

#endif  // CBMDIAR_TENSOR_H_
