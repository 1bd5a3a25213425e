// cbmdiar/tensor.cc
//
// Copyright (c)  2026  cbmdiar authors

#include "cbmdiar/tensor.h"

#include <algorithm>
#include <utility>

namespace cbmdiar {

int64_t ShapeNumElements(const std::vector<int64_t>& shape) {
  int64_t n = 1;
  for (int64_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(const std::vector<int64_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(std::vector<int64_t> shape) : shape_(std::move(shape)) {
  for (int64_t d : shape_) {
    if (d <= 0)
      throw ContractError(StrCat("nonpositive dimension in shape ",
                                 ShapeToString(shape_)));
  }
  storage_ = std::make_shared<Storage>();
  storage_->values.assign(ShapeNumElements(shape_), 0.0);
}

Tensor::Tensor(std::vector<int64_t> shape, std::vector<double> data)
    : Tensor(std::move(shape)) {
  if (static_cast<int64_t>(data.size()) != NumElements())
    throw ContractError(StrCat("data length ", data.size(),
                               " does not match shape ", ShapeString()));
  storage_->values = std::move(data);
}

Tensor Tensor::Zeros(std::vector<int64_t> shape) {
  return Tensor(std::move(shape));
}

Tensor Tensor::Full(std::vector<int64_t> shape, double value) {
  Tensor t(std::move(shape));
  std::fill(t.storage_->values.begin(), t.storage_->values.end(), value);
  return t;
}

Tensor Tensor::Scalar(double value) {
  Tensor t;
  t.shape_ = {};
  t.storage_ = std::make_shared<Storage>();
  t.storage_->values.assign(1, value);
  return t;
}

Tensor Tensor::FromVector(std::vector<double> data) {
  return Tensor({static_cast<int64_t>(data.size())}, std::move(data));
}

int64_t Tensor::NumElements() const {
  if (!storage_) return 0;
  return static_cast<int64_t>(storage_->values.size());
}

double* Tensor::Data() { return storage_->values.data(); }
const double* Tensor::Data() const { return storage_->values.data(); }

std::vector<double> Tensor::ToVector() const { return storage_->values; }

double Tensor::Item() const {
  if (NumElements() != 1)
    throw ContractError(StrCat("Item() on non-scalar tensor ", ShapeString()));
  return storage_->values[0];
}

double& Tensor::operator()(int64_t i) { return storage_->values[i]; }
double Tensor::operator()(int64_t i) const { return storage_->values[i]; }

double& Tensor::operator()(int64_t i, int64_t j) {
  return storage_->values[i * shape_[1] + j];
}
double Tensor::operator()(int64_t i, int64_t j) const {
  return storage_->values[i * shape_[1] + j];
}

double& Tensor::operator()(int64_t i, int64_t j, int64_t k) {
  return storage_->values[(i * shape_[1] + j) * shape_[2] + k];
}
double Tensor::operator()(int64_t i, int64_t j, int64_t k) const {
  return storage_->values[(i * shape_[1] + j) * shape_[2] + k];
}

bool Tensor::RequiresGrad() const {
  return storage_ && storage_->requires_grad;
}

void Tensor::SetRequiresGrad(bool value) { storage_->requires_grad = value; }

double* Tensor::GradData() {
  if (storage_->grad.empty()) storage_->grad.assign(storage_->values.size(), 0.0);
  return storage_->grad.data();
}

const double* Tensor::GradDataIfPresent() const {
  if (!storage_ || storage_->grad.empty()) return nullptr;
  return storage_->grad.data();
}

bool Tensor::HasGrad() const { return storage_ && !storage_->grad.empty(); }

std::vector<double> Tensor::GradToVector() const {
  if (!HasGrad()) return std::vector<double>(NumElements(), 0.0);
  return storage_->grad;
}

void Tensor::ZeroGrad() {
  if (HasGrad()) std::fill(storage_->grad.begin(), storage_->grad.end(), 0.0);
}

Tensor Tensor::Clone() const {
  Tensor t;
  t.shape_ = shape_;
  t.storage_ = std::make_shared<Storage>();
  t.storage_->values = storage_->values;
  t.storage_->requires_grad = storage_->requires_grad;
  return t;
}

std::string Tensor::ShapeString() const { return ShapeToString(shape_); }

void Tape::Record(std::function<void()> backward_step) {
  records_.push_back(std::move(backward_step));
}

void Tape::Backward(Tensor loss) {
  if (loss.NumElements() != 1)
    throw ContractError(StrCat("backward requires a scalar loss, got ",
                               loss.ShapeString()));
  if (records_.empty())
    throw ContractError("backward on an empty tape");
  loss.GradData()[0] += 1.0;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) (*it)();
  records_.clear();
}

}  // namespace cbmdiar
