// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "uego/nn/tensor.hpp"

namespace uego::nn {

/// A differentiable layer. forward() pushes whatever backward() needs onto a
/// per-layer stack (unless gradients are disabled) and backward() pops it, so
/// one layer object may be applied several times per step as long as the
/// backward calls come in reverse order. Parameter gradients accumulate.
template <typename T>
class Module {
 public:
  virtual ~Module() = default;
  virtual Tensor<T> forward(const Tensor<T>& x) = 0;
  virtual Tensor<T> backward(const Tensor<T>& grad_out) = 0;
  virtual void collect(ParameterList<T>& out) const { (void)out; }
  /// Drops any cached activations.
  virtual void clear() = 0;

  ParameterList<T> parameters() const {
    ParameterList<T> p;
    collect(p);
    return p;
  }
};

template <typename T>
using ModulePtr = std::unique_ptr<Module<T>>;

/// Fills `p` with N(0, gain^2 / fan_in).
template <typename T>
void init_fan_in(Parameter<T>& p, int fan_in, double gain, std::mt19937_64& rng);

struct ConvOptions {
  int in = 1;
  int out = 1;
  int kernel = 3;
  int stride = 1;
  int pad = 1;
  bool bias = true;
  /// Skips the input gradient (for layers that read raw images).
  bool input_grad = true;
  /// Weight init gain; 0 starts the weights at zero.
  double gain = 1.4142135623730951;
};

inline int conv_out_size(int in, int kernel, int stride, int pad) {
  return (in + 2 * pad - kernel) / stride + 1;
}

template <typename T>
class Conv2d final : public Module<T> {
 public:
  Conv2d(const std::string& name, const ConvOptions& options, std::mt19937_64& rng);
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override { caches_.clear(); }

  const ConvOptions& options() const { return opt_; }
  ParamPtr<T> weight;
  ParamPtr<T> bias;

 private:
  struct Cache {
    RowMatrix<T> col;
    int h = 0;
    int w = 0;
  };
  bool pointwise() const { return opt_.kernel == 1 && opt_.stride == 1 && opt_.pad == 0; }

  ConvOptions opt_;
  std::vector<Cache> caches_;
};

/// Transposed convolution; (H, W) -> ((H-1)s - 2p + k, ...). Weight shape (in, out, k, k).
template <typename T>
class ConvTranspose2d final : public Module<T> {
 public:
  ConvTranspose2d(const std::string& name, const ConvOptions& options, std::mt19937_64& rng);
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override { caches_.clear(); }

  ParamPtr<T> weight;
  ParamPtr<T> bias;

 private:
  ConvOptions opt_;
  std::vector<Tensor<T>> caches_;
};

/// ReLU for slope 0, leaky ReLU otherwise.
template <typename T>
class Activation final : public Module<T> {
 public:
  explicit Activation(T negative_slope = T(0)) : slope_(negative_slope) {}
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void clear() override { caches_.clear(); }

 private:
  T slope_;
  std::vector<std::vector<std::uint8_t>> caches_;
};

template <typename T>
class MaxPool2d final : public Module<T> {
 public:
  MaxPool2d(int kernel, int stride, int pad) : k_(kernel), s_(stride), p_(pad) {}
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void clear() override { caches_.clear(); }

 private:
  struct Cache {
    std::vector<std::int32_t> argmax;
    int c = 0;
    int h = 0;
    int w = 0;
  };
  int k_;
  int s_;
  int p_;
  std::vector<Cache> caches_;
};

/// Bilinear x2 upsampling with half-pixel centers.
template <typename T>
class Upsample2x final : public Module<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void clear() override { shapes_.clear(); }

 private:
  struct Shape {
    int c, h, w;
  };
  std::vector<Shape> shapes_;
};

/// y = W x + b on the flattened input; output shape (out, 1, 1).
template <typename T>
class Linear final : public Module<T> {
 public:
  Linear(const std::string& name, int in, int out, double gain, std::mt19937_64& rng);
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override { caches_.clear(); }

  ParamPtr<T> weight;
  ParamPtr<T> bias;

 private:
  struct Cache {
    Tensor<T> input;
  };
  std::vector<Cache> caches_;
};

/// Reinterprets the element order under a new shape.
template <typename T>
class Reshape final : public Module<T> {
 public:
  Reshape(int c, int h, int w) : c_(c), h_(h), w_(w) {}
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void clear() override { shapes_.clear(); }

 private:
  int c_, h_, w_;
  struct Shape {
    int c, h, w;
  };
  std::vector<Shape> shapes_;
};

template <typename T>
class Sequential final : public Module<T> {
 public:
  Sequential() = default;
  void add(ModulePtr<T> m) { layers_.push_back(std::move(m)); }
  Tensor<T> forward(const Tensor<T>& x) override;
  Tensor<T> backward(const Tensor<T>& grad_out) override;
  void collect(ParameterList<T>& out) const override;
  void clear() override;
  std::size_t size() const { return layers_.size(); }

 private:
  std::vector<ModulePtr<T>> layers_;
};

// Low-level helpers, exposed for tests.
template <typename T>
void im2col(const Tensor<T>& x, int kernel, int stride, int pad, int out_h, int out_w,
            RowMatrix<T>& col);
template <typename T>
void col2im(const RowMatrix<T>& col, int channels, int h, int w, int kernel, int stride, int pad,
            int out_h, int out_w, Tensor<T>& x);

}  // namespace uego::nn
