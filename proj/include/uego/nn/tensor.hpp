// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace uego::nn {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Channel-major activation of one sample: data[(c * h + y) * w + x].
/// Vectors are stored as (n, 1, 1). Storage is SIMD-aligned so vectorised
/// products see the same alignment on every allocation and stay bit-reproducible.
template <typename T>
struct Tensor {
  int c = 0;
  int h = 1;
  int w = 1;
  std::vector<T, Eigen::aligned_allocator<T>> data;

  Tensor() = default;
  Tensor(int channels, int height, int width, T fill = T(0))
      : c(channels), h(height), w(width),
        data(static_cast<std::size_t>(channels) * height * width, fill) {}

  std::size_t size() const { return data.size(); }
  int plane() const { return h * w; }
  bool same_shape(const Tensor& o) const { return c == o.c && h == o.h && w == o.w; }

  T& at(int ch, int y, int x) { return data[(static_cast<std::size_t>(ch) * h + y) * w + x]; }
  T at(int ch, int y, int x) const { return data[(static_cast<std::size_t>(ch) * h + y) * w + x]; }

  /// (channels, h * w) view.
  Eigen::Map<RowMatrix<T>> mat() { return {data.data(), c, h * w}; }
  Eigen::Map<const RowMatrix<T>> mat() const { return {data.data(), c, h * w}; }
  Eigen::Map<Vector<T>> vec() { return {data.data(), static_cast<Eigen::Index>(data.size())}; }
  Eigen::Map<const Vector<T>> vec() const {
    return {data.data(), static_cast<Eigen::Index>(data.size())};
  }
};

/// Concatenates along the channel axis; spatial sizes must match.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

/// Inverse of concat_channels: the first `channels_a` channels go to `a`.
template <typename T>
void split_channels(const Tensor<T>& x, int channels_a, Tensor<T>& a, Tensor<T>& b);

/// Element-wise a += b, shapes must match.
template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b);

template <typename T>
struct Parameter {
  std::string name;
  std::vector<int> shape;
  Vector<T> value;
  Vector<T> grad;

  Parameter(std::string n, std::vector<int> s);
  Eigen::Index size() const { return value.size(); }
  /// Rows = shape[0], columns = product of the rest.
  Eigen::Map<RowMatrix<T>> matrix();
  Eigen::Map<const RowMatrix<T>> matrix() const;
  Eigen::Map<RowMatrix<T>> grad_matrix();
};

template <typename T>
using ParamPtr = std::shared_ptr<Parameter<T>>;

/// Parameters of a module tree, in registration order, without duplicates.
template <typename T>
class ParameterList {
 public:
  void add(const ParamPtr<T>& p);
  void append(const ParameterList& other);
  const std::vector<ParamPtr<T>>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t scalar_count() const;
  void zero_grad();
  /// Multiplies every gradient by `s`.
  void scale_grad(T s);
  ParamPtr<T> find(const std::string& name) const;

 private:
  std::vector<ParamPtr<T>> items_;
};

/// When false, forward passes keep no state for backward.
bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace uego::nn
