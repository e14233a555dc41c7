// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uego/core/error.hpp"

namespace uego::nn {
namespace {

template <typename Stack>
auto pop(Stack& stack, const char* layer) {
  if (stack.empty()) throw ArgumentError(std::string(layer) + ": backward without a matching forward");
  auto top = std::move(stack.back());
  stack.pop_back();
  return top;
}

}  // namespace

template <typename T>
void init_fan_in(Parameter<T>& p, int fan_in, double gain, std::mt19937_64& rng) {
  if (gain == 0.0) {
    p.value.setZero();
    return;
  }
  std::normal_distribution<double> dist(0.0, gain / std::sqrt(static_cast<double>(fan_in)));
  for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value[i] = static_cast<T>(dist(rng));
}

template <typename T>
void im2col(const Tensor<T>& x, int k, int s, int p, int oh, int ow, RowMatrix<T>& col) {
  col.resize(static_cast<Eigen::Index>(x.c) * k * k, static_cast<Eigen::Index>(oh) * ow);
  for (int c = 0; c < x.c; ++c) {
    const T* src = x.data.data() + static_cast<std::size_t>(c) * x.h * x.w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* dst = col.row((static_cast<Eigen::Index>(c) * k + ky) * k + kx).data();
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * s - p + ky;
          T* row = dst + static_cast<std::size_t>(oy) * ow;
          if (iy < 0 || iy >= x.h) {
            std::fill(row, row + ow, T(0));
            continue;
          }
          const T* line = src + static_cast<std::size_t>(iy) * x.w;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * s - p + kx;
            row[ox] = (ix >= 0 && ix < x.w) ? line[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const RowMatrix<T>& col, int channels, int h, int w, int k, int s, int p, int oh,
            int ow, Tensor<T>& x) {
  if (x.c != channels || x.h != h || x.w != w) x = Tensor<T>(channels, h, w);
  for (int c = 0; c < channels; ++c) {
    T* dst = x.data.data() + static_cast<std::size_t>(c) * h * w;
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* src = col.row((static_cast<Eigen::Index>(c) * k + ky) * k + kx).data();
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * s - p + ky;
          if (iy < 0 || iy >= h) continue;
          T* line = dst + static_cast<std::size_t>(iy) * w;
          const T* row = src + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * s - p + kx;
            if (ix >= 0 && ix < w) line[ix] += row[ox];
          }
        }
      }
    }
  }
}

// Conv2d

template <typename T>
Conv2d<T>::Conv2d(const std::string& name, const ConvOptions& o, std::mt19937_64& rng) : opt_(o) {
  if (o.in <= 0 || o.out <= 0 || o.kernel <= 0 || o.stride <= 0 || o.pad < 0) {
    throw ArgumentError("conv " + name + ": invalid geometry");
  }
  weight = std::make_shared<Parameter<T>>(name + ".weight",
                                          std::vector<int>{o.out, o.in, o.kernel, o.kernel});
  init_fan_in(*weight, o.in * o.kernel * o.kernel, o.gain, rng);
  if (o.bias) bias = std::make_shared<Parameter<T>>(name + ".bias", std::vector<int>{o.out});
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x) {
  if (x.c != opt_.in) {
    throw ArgumentError(weight->name + ": expected " + std::to_string(opt_.in) + " input channels, got " +
                        std::to_string(x.c));
  }
  const int oh = conv_out_size(x.h, opt_.kernel, opt_.stride, opt_.pad);
  const int ow = conv_out_size(x.w, opt_.kernel, opt_.stride, opt_.pad);
  if (oh <= 0 || ow <= 0) throw ArgumentError(weight->name + ": input too small");
  Tensor<T> y(opt_.out, oh, ow);
  Cache cache;
  cache.h = x.h;
  cache.w = x.w;
  if (pointwise()) {
    y.mat().noalias() = weight->matrix() * x.mat();
    if (grad_enabled()) cache.col = x.mat();
  } else {
    im2col(x, opt_.kernel, opt_.stride, opt_.pad, oh, ow, cache.col);
    y.mat().noalias() = weight->matrix() * cache.col;
  }
  if (bias) y.mat().colwise() += bias->value;
  if (grad_enabled()) caches_.push_back(std::move(cache));
  return y;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& g) {
  Cache cache = pop(caches_, "conv");
  const auto gm = g.mat();
  weight->grad_matrix().noalias() += gm * cache.col.transpose();
  if (bias) bias->grad += gm.rowwise().sum();
  if (!opt_.input_grad) return {};
  if (pointwise()) {
    Tensor<T> dx(opt_.in, cache.h, cache.w);
    dx.mat().noalias() = weight->matrix().transpose() * gm;
    return dx;
  }
  RowMatrix<T> dcol = weight->matrix().transpose() * gm;
  Tensor<T> dx(opt_.in, cache.h, cache.w);
  col2im(dcol, opt_.in, cache.h, cache.w, opt_.kernel, opt_.stride, opt_.pad, g.h, g.w, dx);
  return dx;
}

template <typename T>
void Conv2d<T>::collect(ParameterList<T>& out) const {
  out.add(weight);
  if (bias) out.add(bias);
}

// ConvTranspose2d

template <typename T>
ConvTranspose2d<T>::ConvTranspose2d(const std::string& name, const ConvOptions& o,
                                    std::mt19937_64& rng)
    : opt_(o) {
  if (o.in <= 0 || o.out <= 0 || o.kernel <= 0 || o.stride <= 0 || o.pad < 0) {
    throw ArgumentError("deconv " + name + ": invalid geometry");
  }
  weight = std::make_shared<Parameter<T>>(name + ".weight",
                                          std::vector<int>{o.in, o.out, o.kernel, o.kernel});
  // Each output pixel receives about in * (k / s)^2 contributions.
  const int fan_in = std::max(1, o.in * (o.kernel / o.stride) * (o.kernel / o.stride));
  init_fan_in(*weight, fan_in, o.gain, rng);
  if (o.bias) bias = std::make_shared<Parameter<T>>(name + ".bias", std::vector<int>{o.out});
}

template <typename T>
Tensor<T> ConvTranspose2d<T>::forward(const Tensor<T>& x) {
  if (x.c != opt_.in) throw ArgumentError(weight->name + ": input channel mismatch");
  const int oh = (x.h - 1) * opt_.stride - 2 * opt_.pad + opt_.kernel;
  const int ow = (x.w - 1) * opt_.stride - 2 * opt_.pad + opt_.kernel;
  const RowMatrix<T> col = weight->matrix().transpose() * x.mat();
  Tensor<T> y(opt_.out, oh, ow);
  col2im(col, opt_.out, oh, ow, opt_.kernel, opt_.stride, opt_.pad, x.h, x.w, y);
  if (bias) y.mat().colwise() += bias->value;
  if (grad_enabled()) caches_.push_back(x);
  return y;
}

template <typename T>
Tensor<T> ConvTranspose2d<T>::backward(const Tensor<T>& g) {
  const Tensor<T> x = pop(caches_, "deconv");
  RowMatrix<T> gcol;
  im2col(g, opt_.kernel, opt_.stride, opt_.pad, x.h, x.w, gcol);
  weight->grad_matrix().noalias() += x.mat() * gcol.transpose();
  if (bias) bias->grad += g.mat().rowwise().sum();
  Tensor<T> dx(x.c, x.h, x.w);
  dx.mat().noalias() = weight->matrix() * gcol;
  return dx;
}

template <typename T>
void ConvTranspose2d<T>::collect(ParameterList<T>& out) const {
  out.add(weight);
  if (bias) out.add(bias);
}

// Activation

template <typename T>
Tensor<T> Activation<T>::forward(const Tensor<T>& x) {
  Tensor<T> y = x;
  std::vector<std::uint8_t> mask;
  const bool keep = grad_enabled();
  if (keep) mask.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool pos = x.data[i] > T(0);
    if (!pos) y.data[i] = slope_ * x.data[i];
    if (keep) mask[i] = pos;
  }
  if (keep) caches_.push_back(std::move(mask));
  return y;
}

template <typename T>
Tensor<T> Activation<T>::backward(const Tensor<T>& g) {
  const std::vector<std::uint8_t> mask = pop(caches_, "activation");
  Tensor<T> dx = g;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!mask[i]) dx.data[i] *= slope_;
  }
  return dx;
}

// MaxPool2d

template <typename T>
Tensor<T> MaxPool2d<T>::forward(const Tensor<T>& x) {
  const int oh = conv_out_size(x.h, k_, s_, p_);
  const int ow = conv_out_size(x.w, k_, s_, p_);
  Tensor<T> y(x.c, oh, ow);
  Cache cache{std::vector<std::int32_t>(y.size()), x.c, x.h, x.w};
  for (int c = 0; c < x.c; ++c) {
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        T best = -std::numeric_limits<T>::infinity();
        std::int32_t arg = -1;
        for (int ky = 0; ky < k_; ++ky) {
          const int iy = oy * s_ - p_ + ky;
          if (iy < 0 || iy >= x.h) continue;
          for (int kx = 0; kx < k_; ++kx) {
            const int ix = ox * s_ - p_ + kx;
            if (ix < 0 || ix >= x.w) continue;
            const T v = x.at(c, iy, ix);
            if (v > best) {
              best = v;
              arg = (c * x.h + iy) * x.w + ix;
            }
          }
        }
        y.at(c, oy, ox) = best;
        cache.argmax[(static_cast<std::size_t>(c) * oh + oy) * ow + ox] = arg;
      }
    }
  }
  if (grad_enabled()) caches_.push_back(std::move(cache));
  return y;
}

template <typename T>
Tensor<T> MaxPool2d<T>::backward(const Tensor<T>& g) {
  const Cache cache = pop(caches_, "maxpool");
  Tensor<T> dx(cache.c, cache.h, cache.w);
  for (std::size_t i = 0; i < g.size(); ++i) dx.data[static_cast<std::size_t>(cache.argmax[i])] += g.data[i];
  return dx;
}

// Upsample2x

namespace {

struct Tap {
  int i0, i1;
  double w0, w1;
};

Tap bilinear_tap(int dst, int in_size) {
  double src = (dst + 0.5) / 2.0 - 0.5;
  if (src < 0.0) src = 0.0;
  const int i0 = std::min(static_cast<int>(src), in_size - 1);
  const int i1 = std::min(i0 + 1, in_size - 1);
  const double l = src - i0;
  return {i0, i1, 1.0 - l, l};
}

}  // namespace

template <typename T>
Tensor<T> Upsample2x<T>::forward(const Tensor<T>& x) {
  Tensor<T> y(x.c, 2 * x.h, 2 * x.w);
  std::vector<Tap> tx(static_cast<std::size_t>(y.w));
  for (int ox = 0; ox < y.w; ++ox) tx[static_cast<std::size_t>(ox)] = bilinear_tap(ox, x.w);
  for (int c = 0; c < x.c; ++c) {
    for (int oy = 0; oy < y.h; ++oy) {
      const Tap ty = bilinear_tap(oy, x.h);
      for (int ox = 0; ox < y.w; ++ox) {
        const Tap& t = tx[static_cast<std::size_t>(ox)];
        const double v = ty.w0 * (t.w0 * x.at(c, ty.i0, t.i0) + t.w1 * x.at(c, ty.i0, t.i1)) +
                         ty.w1 * (t.w0 * x.at(c, ty.i1, t.i0) + t.w1 * x.at(c, ty.i1, t.i1));
        y.at(c, oy, ox) = static_cast<T>(v);
      }
    }
  }
  if (grad_enabled()) shapes_.push_back({x.c, x.h, x.w});
  return y;
}

template <typename T>
Tensor<T> Upsample2x<T>::backward(const Tensor<T>& g) {
  const Shape s = pop(shapes_, "upsample");
  Tensor<T> dx(s.c, s.h, s.w);
  std::vector<Tap> tx(static_cast<std::size_t>(g.w));
  for (int ox = 0; ox < g.w; ++ox) tx[static_cast<std::size_t>(ox)] = bilinear_tap(ox, s.w);
  for (int c = 0; c < s.c; ++c) {
    for (int oy = 0; oy < g.h; ++oy) {
      const Tap ty = bilinear_tap(oy, s.h);
      for (int ox = 0; ox < g.w; ++ox) {
        const Tap& t = tx[static_cast<std::size_t>(ox)];
        const double v = g.at(c, oy, ox);
        dx.at(c, ty.i0, t.i0) += static_cast<T>(ty.w0 * t.w0 * v);
        dx.at(c, ty.i0, t.i1) += static_cast<T>(ty.w0 * t.w1 * v);
        dx.at(c, ty.i1, t.i0) += static_cast<T>(ty.w1 * t.w0 * v);
        dx.at(c, ty.i1, t.i1) += static_cast<T>(ty.w1 * t.w1 * v);
      }
    }
  }
  return dx;
}

// Linear

template <typename T>
Linear<T>::Linear(const std::string& name, int in, int out, double gain, std::mt19937_64& rng) {
  if (in <= 0 || out <= 0) throw ArgumentError("linear " + name + ": invalid size");
  weight = std::make_shared<Parameter<T>>(name + ".weight", std::vector<int>{out, in});
  bias = std::make_shared<Parameter<T>>(name + ".bias", std::vector<int>{out});
  init_fan_in(*weight, in, gain, rng);
}

template <typename T>
Tensor<T> Linear<T>::forward(const Tensor<T>& x) {
  if (static_cast<Eigen::Index>(x.size()) != weight->matrix().cols()) {
    throw ArgumentError(weight->name + ": input size mismatch");
  }
  Tensor<T> y(static_cast<int>(weight->matrix().rows()), 1, 1);
  y.vec().noalias() = weight->matrix() * x.vec() + bias->value;
  if (grad_enabled()) caches_.push_back(Cache{x});
  return y;
}

template <typename T>
Tensor<T> Linear<T>::backward(const Tensor<T>& g) {
  const Cache cache = pop(caches_, "linear");
  weight->grad_matrix().noalias() += g.vec() * cache.input.vec().transpose();
  bias->grad += g.vec();
  Tensor<T> dx = cache.input;
  dx.vec().noalias() = weight->matrix().transpose() * g.vec();
  return dx;
}

template <typename T>
void Linear<T>::collect(ParameterList<T>& out) const {
  out.add(weight);
  out.add(bias);
}

// Reshape

template <typename T>
Tensor<T> Reshape<T>::forward(const Tensor<T>& x) {
  if (x.size() != static_cast<std::size_t>(c_) * h_ * w_) throw ArgumentError("reshape: size mismatch");
  Tensor<T> y = x;
  y.c = c_;
  y.h = h_;
  y.w = w_;
  if (grad_enabled()) shapes_.push_back({x.c, x.h, x.w});
  return y;
}

template <typename T>
Tensor<T> Reshape<T>::backward(const Tensor<T>& g) {
  const Shape s = pop(shapes_, "reshape");
  Tensor<T> dx = g;
  dx.c = s.c;
  dx.h = s.h;
  dx.w = s.w;
  return dx;
}

// Sequential

template <typename T>
Tensor<T> Sequential<T>::forward(const Tensor<T>& x) {
  Tensor<T> h = x;
  for (auto& l : layers_) h = l->forward(h);
  return h;
}

template <typename T>
Tensor<T> Sequential<T>::backward(const Tensor<T>& g) {
  Tensor<T> d = g;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) d = (*it)->backward(d);
  return d;
}

template <typename T>
void Sequential<T>::collect(ParameterList<T>& out) const {
  for (const auto& l : layers_) l->collect(out);
}

template <typename T>
void Sequential<T>::clear() {
  for (auto& l : layers_) l->clear();
}

#define UEGO_INSTANTIATE(T)                                                                   \
  template void init_fan_in(Parameter<T>&, int, double, std::mt19937_64&);                    \
  template void im2col(const Tensor<T>&, int, int, int, int, int, RowMatrix<T>&);             \
  template void col2im(const RowMatrix<T>&, int, int, int, int, int, int, int, int, Tensor<T>&); \
  template class Conv2d<T>;                                                                   \
  template class ConvTranspose2d<T>;                                                          \
  template class Activation<T>;                                                               \
  template class MaxPool2d<T>;                                                                \
  template class Upsample2x<T>;                                                               \
  template class Linear<T>;                                                                   \
  template class Reshape<T>;                                                                  \
  template class Sequential<T>;

UEGO_INSTANTIATE(float)
UEGO_INSTANTIATE(double)

}  // namespace uego::nn
