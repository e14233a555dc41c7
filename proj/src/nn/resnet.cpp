// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/resnet.hpp"

#include "uego/core/error.hpp"

namespace uego::nn {
namespace {

ConvOptions conv(int in, int out, int k, int stride, double gain = 1.4142135623730951) {
  ConvOptions o;
  o.in = in;
  o.out = out;
  o.kernel = k;
  o.stride = stride;
  o.pad = k / 2;
  o.gain = gain;
  return o;
}

}  // namespace

std::vector<int> ResNetConfig::stage_blocks() const {
  std::vector<int> counts;
  switch (depth) {
    case 18: counts = {2, 2, 2, 2}; break;
    case 34: counts = {3, 4, 6, 3}; break;
    case 50: counts = {3, 4, 6, 3}; break;
    case 101: counts = {3, 4, 23, 3}; break;
    default: throw ArgumentError("unsupported backbone depth " + std::to_string(depth));
  }
  if (stages < 1 || stages > 4) throw ArgumentError("encoder stages must be in [1, 4]");
  if (!blocks.empty()) {
    if (static_cast<int>(blocks.size()) != stages) throw ArgumentError("one block count per stage");
    for (int b : blocks) {
      if (b < 1) throw ArgumentError("block counts must be positive");
    }
    return blocks;
  }
  counts.resize(static_cast<std::size_t>(stages));
  return counts;
}

int ResNetConfig::stage_channels(int stage) const {
  const int width = base_width << stage;
  return bottleneck() ? 4 * width : width;
}

// BasicBlock

template <typename T>
BasicBlock<T>::BasicBlock(const std::string& name, int in, int out, int stride, bool zero_init,
                          std::mt19937_64& rng)
    : conv1_(name + ".conv1", conv(in, out, 3, stride), rng),
      conv2_(name + ".conv2", conv(out, out, 3, 1, zero_init ? 0.0 : 1.0), rng) {
  if (stride != 1 || in != out) {
    shortcut_ = std::make_unique<Conv2d<T>>(name + ".shortcut", conv(in, out, 1, stride, 1.0), rng);
  }
}

template <typename T>
Tensor<T> BasicBlock<T>::forward(const Tensor<T>& x) {
  Tensor<T> h = conv2_.forward(act1_.forward(conv1_.forward(x)));
  add_inplace(h, shortcut_ ? shortcut_->forward(x) : x);
  return act_out_.forward(h);
}

template <typename T>
Tensor<T> BasicBlock<T>::backward(const Tensor<T>& g) {
  const Tensor<T> gh = act_out_.backward(g);
  Tensor<T> dx = shortcut_ ? shortcut_->backward(gh) : gh;
  add_inplace(dx, conv1_.backward(act1_.backward(conv2_.backward(gh))));
  return dx;
}

template <typename T>
void BasicBlock<T>::collect(ParameterList<T>& out) const {
  conv1_.collect(out);
  conv2_.collect(out);
  if (shortcut_) shortcut_->collect(out);
}

template <typename T>
void BasicBlock<T>::clear() {
  conv1_.clear();
  act1_.clear();
  conv2_.clear();
  if (shortcut_) shortcut_->clear();
  act_out_.clear();
}

// Bottleneck

template <typename T>
Bottleneck<T>::Bottleneck(const std::string& name, int in, int mid, int out, int stride,
                          bool zero_init, std::mt19937_64& rng)
    : conv1_(name + ".conv1", conv(in, mid, 1, 1), rng),
      conv2_(name + ".conv2", conv(mid, mid, 3, stride), rng),
      conv3_(name + ".conv3", conv(mid, out, 1, 1, zero_init ? 0.0 : 1.0), rng) {
  if (stride != 1 || in != out) {
    shortcut_ = std::make_unique<Conv2d<T>>(name + ".shortcut", conv(in, out, 1, stride, 1.0), rng);
  }
}

template <typename T>
Tensor<T> Bottleneck<T>::forward(const Tensor<T>& x) {
  Tensor<T> h = conv3_.forward(act2_.forward(conv2_.forward(act1_.forward(conv1_.forward(x)))));
  add_inplace(h, shortcut_ ? shortcut_->forward(x) : x);
  return act_out_.forward(h);
}

template <typename T>
Tensor<T> Bottleneck<T>::backward(const Tensor<T>& g) {
  const Tensor<T> gh = act_out_.backward(g);
  Tensor<T> dx = shortcut_ ? shortcut_->backward(gh) : gh;
  add_inplace(dx, conv1_.backward(act1_.backward(conv2_.backward(act2_.backward(conv3_.backward(gh))))));
  return dx;
}

template <typename T>
void Bottleneck<T>::collect(ParameterList<T>& out) const {
  conv1_.collect(out);
  conv2_.collect(out);
  conv3_.collect(out);
  if (shortcut_) shortcut_->collect(out);
}

template <typename T>
void Bottleneck<T>::clear() {
  conv1_.clear();
  act1_.clear();
  conv2_.clear();
  act2_.clear();
  conv3_.clear();
  if (shortcut_) shortcut_->clear();
  act_out_.clear();
}

// ResNetEncoder

template <typename T>
ResNetEncoder<T>::ResNetEncoder(const std::string& name, const ResNetConfig& config,
                                std::mt19937_64& rng)
    : config_(config) {
  if (config.base_width < 1) throw ArgumentError("encoder base width must be positive");
  const std::vector<int> counts = config.stage_blocks();
  ConvOptions stem = conv(config.in_channels, config.base_width, 7, 2);
  stem.input_grad = false;
  stem_ = std::make_unique<Conv2d<T>>(name + ".stem", stem, rng);
  int channels = config.base_width;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    Sequential<T> stage;
    const int si = static_cast<int>(s);
    const int out = config.stage_channels(si);
    const int mid = config.base_width << si;
    for (int b = 0; b < counts[s]; ++b) {
      const std::string block = name + ".stage" + std::to_string(s + 1) + "." + std::to_string(b);
      const int stride = (b == 0 && s > 0) ? 2 : 1;
      if (config.bottleneck()) {
        stage.add(std::make_unique<Bottleneck<T>>(block, channels, mid, out, stride,
                                                  config.zero_init_residual, rng));
      } else {
        stage.add(std::make_unique<BasicBlock<T>>(block, channels, out, stride,
                                                  config.zero_init_residual, rng));
      }
      channels = out;
    }
    stages_.push_back(std::move(stage));
  }
}

template <typename T>
std::vector<Tensor<T>> ResNetEncoder<T>::forward(const Tensor<T>& image) {
  if (image.c != config_.in_channels) throw ArgumentError("encoder: input channel mismatch");
  std::vector<Tensor<T>> feats;
  Tensor<T> h = pool_.forward(stem_act_.forward(stem_->forward(image)));
  for (auto& stage : stages_) {
    h = stage.forward(h);
    feats.push_back(h);
  }
  return feats;
}

template <typename T>
void ResNetEncoder<T>::backward(const std::vector<Tensor<T>>& grads) {
  if (grads.size() != stages_.size()) throw ArgumentError("encoder: one gradient per stage");
  Tensor<T> g;
  for (int s = static_cast<int>(stages_.size()) - 1; s >= 0; --s) {
    const Tensor<T>& ext = grads[static_cast<std::size_t>(s)];
    if (g.size() == 0) {
      g = ext;
    } else if (ext.size() != 0) {
      add_inplace(g, ext);
    }
    if (g.size() == 0) throw ArgumentError("encoder: deepest stage needs a gradient");
    g = stages_[static_cast<std::size_t>(s)].backward(g);
  }
  stem_->backward(stem_act_.backward(pool_.backward(g)));
}

template <typename T>
void ResNetEncoder<T>::collect(ParameterList<T>& out) const {
  stem_->collect(out);
  for (const auto& s : stages_) s.collect(out);
}

template <typename T>
void ResNetEncoder<T>::clear() {
  stem_->clear();
  stem_act_.clear();
  pool_.clear();
  for (auto& s : stages_) s.clear();
}

template class BasicBlock<float>;
template class BasicBlock<double>;
template class Bottleneck<float>;
template class Bottleneck<double>;
template class ResNetEncoder<float>;
template class ResNetEncoder<double>;

}  // namespace uego::nn
