// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "uego/core/error.hpp"

namespace uego::nn {
namespace {

thread_local bool g_grad_enabled = true;

}  // namespace

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.h != b.h || a.w != b.w) throw ArgumentError("concat_channels: spatial sizes differ");
  Tensor<T> out(a.c + b.c, a.h, a.w);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

template <typename T>
void split_channels(const Tensor<T>& x, int channels_a, Tensor<T>& a, Tensor<T>& b) {
  if (channels_a < 0 || channels_a > x.c) throw ArgumentError("split_channels: bad split point");
  a = Tensor<T>(channels_a, x.h, x.w);
  b = Tensor<T>(x.c - channels_a, x.h, x.w);
  const auto mid = x.data.begin() + static_cast<std::ptrdiff_t>(a.size());
  std::copy(x.data.begin(), mid, a.data.begin());
  std::copy(mid, x.data.end(), b.data.begin());
}

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b) {
  if (!a.same_shape(b)) throw ArgumentError("add_inplace: shape mismatch");
  a.vec() += b.vec();
}

template <typename T>
Parameter<T>::Parameter(std::string n, std::vector<int> s) : name(std::move(n)), shape(std::move(s)) {
  const Eigen::Index count =
      std::accumulate(shape.begin(), shape.end(), Eigen::Index{1}, std::multiplies<>());
  value = Vector<T>::Zero(count);
  grad = Vector<T>::Zero(count);
}

template <typename T>
Eigen::Map<RowMatrix<T>> Parameter<T>::matrix() {
  const Eigen::Index rows = shape.empty() ? 1 : shape[0];
  return {value.data(), rows, value.size() / rows};
}

template <typename T>
Eigen::Map<const RowMatrix<T>> Parameter<T>::matrix() const {
  const Eigen::Index rows = shape.empty() ? 1 : shape[0];
  return {value.data(), rows, value.size() / rows};
}

template <typename T>
Eigen::Map<RowMatrix<T>> Parameter<T>::grad_matrix() {
  const Eigen::Index rows = shape.empty() ? 1 : shape[0];
  return {grad.data(), rows, grad.size() / rows};
}

template <typename T>
void ParameterList<T>::add(const ParamPtr<T>& p) {
  if (std::find(items_.begin(), items_.end(), p) == items_.end()) items_.push_back(p);
}

template <typename T>
void ParameterList<T>::append(const ParameterList& other) {
  for (const auto& p : other.items_) add(p);
}

template <typename T>
std::size_t ParameterList<T>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : items_) n += static_cast<std::size_t>(p->size());
  return n;
}

template <typename T>
void ParameterList<T>::zero_grad() {
  for (const auto& p : items_) p->grad.setZero();
}

template <typename T>
void ParameterList<T>::scale_grad(T s) {
  for (const auto& p : items_) p->grad *= s;
}

template <typename T>
ParamPtr<T> ParameterList<T>::find(const std::string& name) const {
  for (const auto& p : items_) {
    if (p->name == name) return p;
  }
  return nullptr;
}

#define UEGO_INSTANTIATE(T)                                                       \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);         \
  template void split_channels(const Tensor<T>&, int, Tensor<T>&, Tensor<T>&);    \
  template void add_inplace(Tensor<T>&, const Tensor<T>&);                        \
  template struct Parameter<T>;                                                   \
  template class ParameterList<T>;

UEGO_INSTANTIATE(float)
UEGO_INSTANTIATE(double)

}  // namespace uego::nn
