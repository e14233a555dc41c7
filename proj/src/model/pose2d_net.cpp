// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/model/pose2d_net.hpp"

#include <algorithm>
#include <cmath>

#include "uego/core/error.hpp"
#include "uego/nn/checkpoint.hpp"

namespace uego {
namespace {

constexpr int kJoints = static_cast<int>(kHeatmapJointCount);

nn::ConvOptions conv3(int in, int out) {
  nn::ConvOptions o;
  o.in = in;
  o.out = out;
  o.kernel = 3;
  o.pad = 1;
  return o;
}

template <typename T>
void load_pretrained(nn::ResNetEncoder<T>& encoder, const std::string& own_prefix,
                     const nn::Checkpoint& ckpt) {
  nn::ParameterList<T> params;
  encoder.collect(params);
  for (const auto& p : params.items()) {
    const std::string generic = "enc" + p->name.substr(own_prefix.size());
    const auto it = ckpt.tensors.find(generic);
    if (it == ckpt.tensors.end()) throw DataError("pretrained encoder lacks tensor " + generic);
    const std::vector<std::uint64_t> dims(p->shape.begin(), p->shape.end());
    if (it->second.dims != dims) throw DataError("pretrained tensor " + generic + " has the wrong shape");
    const auto v = it->second.to_doubles();
    for (std::size_t i = 0; i < v.size(); ++i) p->value[static_cast<Eigen::Index>(i)] = static_cast<T>(v[i]);
  }
}

template <typename T>
void check_input(const nn::Tensor<T>& x, const Pose2DConfig& c, const char* which) {
  if (x.c != 3 || x.h != c.image_size || x.w != c.image_size) {
    throw ArgumentError(std::string(which) + " image must be 3x" + std::to_string(c.image_size) + "x" +
                        std::to_string(c.image_size) + ", got " + std::to_string(x.c) + "x" +
                        std::to_string(x.h) + "x" + std::to_string(x.w));
  }
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kStereoShared: return "stereo-shared";
    case Variant::kStereoDual: return "stereo-dual";
    case Variant::kMonocular: return "monocular";
  }
  return "stereo-shared";
}

Variant parse_variant(std::string_view name) {
  if (name == "stereo-shared") return Variant::kStereoShared;
  if (name == "stereo-dual") return Variant::kStereoDual;
  if (name == "monocular") return Variant::kMonocular;
  throw ArgumentError("unknown variant '" + std::string(name) +
                      "' (expected stereo-shared, stereo-dual or monocular)");
}

void Pose2DConfig::validate() const {
  encoder_config().stage_blocks();
  if (base_width < 1) throw ArgumentError("base width must be positive");
  if (image_size <= 0 || heatmap_size * 4 != image_size) {
    throw ArgumentError("heatmap size must be a quarter of the image size");
  }
  const int deepest = 1 << (encoder_stages + 1);
  if (image_size % deepest != 0) {
    throw ArgumentError("image size must be divisible by " + std::to_string(deepest));
  }
  for (double s : stddev) {
    if (!(s > 0.0)) throw ArgumentError("normalization std must be positive");
  }
  if (!(head_init_std >= 0.0)) throw ArgumentError("head init std must be non-negative");
}

nn::ResNetConfig Pose2DConfig::encoder_config() const {
  nn::ResNetConfig r;
  r.depth = backbone_depth;
  r.base_width = base_width;
  r.stages = encoder_stages;
  r.blocks = blocks;
  r.zero_init_residual = zero_init_residual;
  return r;
}

nlohmann::json to_json_value(const Pose2DConfig& c) {
  return {{"backbone_depth", c.backbone_depth},
          {"weight_sharing", c.weight_sharing},
          {"variant", std::string(to_string(c.variant))},
          {"base_width", c.base_width},
          {"encoder_stages", c.encoder_stages},
          {"blocks", c.blocks},
          {"image_size", c.image_size},
          {"heatmap_size", c.heatmap_size},
          {"mean", c.mean},
          {"stddev", c.stddev},
          {"pretrained_encoder", c.pretrained_encoder},
          {"zero_init_residual", c.zero_init_residual},
          {"head_init_std", c.head_init_std}};
}

Pose2DConfig pose2d_config_from_json(const nlohmann::json& j) {
  Pose2DConfig c;
  try {
    c.backbone_depth = j.value("backbone_depth", c.backbone_depth);
    c.weight_sharing = j.value("weight_sharing", c.weight_sharing);
    if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
    c.base_width = j.value("base_width", c.base_width);
    c.encoder_stages = j.value("encoder_stages", c.encoder_stages);
    c.blocks = j.value("blocks", c.blocks);
    c.image_size = j.value("image_size", c.image_size);
    c.heatmap_size = j.value("heatmap_size", c.heatmap_size);
    c.mean = j.value("mean", c.mean);
    c.stddev = j.value("stddev", c.stddev);
    c.pretrained_encoder = j.value("pretrained_encoder", c.pretrained_encoder);
    c.zero_init_residual = j.value("zero_init_residual", c.zero_init_residual);
    c.head_init_std = j.value("head_init_std", c.head_init_std);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad pose2d config: ") + e.what());
  }
  c.validate();
  return c;
}

template <typename T>
nn::Tensor<T> image_to_tensor(const RgbImage& image, const Pose2DConfig& config) {
  nn::Tensor<T> t(3, image.height, image.width);
  for (int c = 0; c < 3; ++c) {
    const double scale = 1.0 / (255.0 * config.stddev[static_cast<std::size_t>(c)]);
    const double shift = config.mean[static_cast<std::size_t>(c)] / config.stddev[static_cast<std::size_t>(c)];
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        t.at(c, y, x) = static_cast<T>(image.at(x, y)[c] * scale - shift);
      }
    }
  }
  return t;
}

RgbImage resize_image(const RgbImage& image, int size) {
  if (image.width == size && image.height == size) return image;
  RgbImage out(size, size);
  if (image.width % size == 0 && image.height % size == 0) {
    const int fx = image.width / size;
    const int fy = image.height / size;
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        for (int c = 0; c < 3; ++c) {
          int sum = 0;
          for (int dy = 0; dy < fy; ++dy) {
            for (int dx = 0; dx < fx; ++dx) sum += image.at(x * fx + dx, y * fy + dy)[c];
          }
          out.at(x, y)[c] = static_cast<std::uint8_t>((sum + fx * fy / 2) / (fx * fy));
        }
      }
    }
    return out;
  }
  const double sx = static_cast<double>(image.width) / size;
  const double sy = static_cast<double>(image.height) / size;
  for (int y = 0; y < size; ++y) {
    const double v = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
    const int y0 = static_cast<int>(v);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double ly = v - y0;
    for (int x = 0; x < size; ++x) {
      const double u = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
      const int x0 = static_cast<int>(u);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double lx = u - x0;
      for (int c = 0; c < 3; ++c) {
        const double val = (1 - ly) * ((1 - lx) * image.at(x0, y0)[c] + lx * image.at(x1, y0)[c]) +
                           ly * ((1 - lx) * image.at(x0, y1)[c] + lx * image.at(x1, y1)[c]);
        out.at(x, y)[c] = static_cast<std::uint8_t>(std::lround(val));
      }
    }
  }
  return out;
}

// HeatmapDecoder

template <typename T>
HeatmapDecoder<T>::HeatmapDecoder(const std::string& name, const std::vector<int>& skip_channels,
                                  const std::vector<int>& stage_channels, int out_channels,
                                  double head_init_std, std::mt19937_64& rng) {
  const int depth = static_cast<int>(skip_channels.size());
  if (depth < 1 || stage_channels.size() != skip_channels.size()) {
    throw ArgumentError("decoder needs one channel count per skip");
  }
  int prev = skip_channels.back();
  for (int i = depth - 2; i >= 0; --i) {
    auto stage = std::make_unique<Stage>();
    stage->up_channels = prev;
    const int width = stage_channels[static_cast<std::size_t>(i)];
    const std::string base = name + ".up" + std::to_string(i + 1);
    stage->convs.add(std::make_unique<nn::Conv2d<T>>(
        base + ".conv1", conv3(prev + skip_channels[static_cast<std::size_t>(i)], width), rng));
    stage->convs.add(std::make_unique<nn::Activation<T>>());
    stage->convs.add(std::make_unique<nn::Conv2d<T>>(base + ".conv2", conv3(width, width), rng));
    stage->convs.add(std::make_unique<nn::Activation<T>>());
    stages_.push_back(std::move(stage));
    prev = width;
  }
  nn::ConvOptions head;
  head.in = prev;
  head.out = out_channels;
  head.kernel = 1;
  head.pad = 0;
  head.gain = head_init_std > 0.0 ? head_init_std * std::sqrt(static_cast<double>(prev)) : 1.0;
  head_ = std::make_unique<nn::Conv2d<T>>(name + ".head", head, rng);
}

template <typename T>
nn::Tensor<T> HeatmapDecoder<T>::forward(const std::vector<nn::Tensor<T>>& skips) {
  if (skips.size() != stages_.size() + 1) throw ArgumentError("decoder: wrong number of skips");
  nn::Tensor<T> h = skips.back();
  std::size_t i = skips.size() - 1;
  for (auto& stage : stages_) {
    --i;
    h = stage->convs.forward(nn::concat_channels(stage->up.forward(h), skips[i]));
  }
  return head_->forward(h);
}

template <typename T>
std::vector<nn::Tensor<T>> HeatmapDecoder<T>::backward(const nn::Tensor<T>& grad_out) {
  std::vector<nn::Tensor<T>> grads(stages_.size() + 1);
  nn::Tensor<T> g = head_->backward(grad_out);
  std::size_t i = 0;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it, ++i) {
    nn::Tensor<T> g_up;
    nn::split_channels((*it)->convs.backward(g), (*it)->up_channels, g_up, grads[i]);
    g = (*it)->up.backward(g_up);
  }
  grads.back() = std::move(g);
  return grads;
}

template <typename T>
void HeatmapDecoder<T>::collect(nn::ParameterList<T>& out) const {
  for (const auto& s : stages_) s->convs.collect(out);
  head_->collect(out);
}

template <typename T>
void HeatmapDecoder<T>::clear() {
  for (auto& s : stages_) {
    s->up.clear();
    s->convs.clear();
  }
  head_->clear();
}

// Pose2DNet

template <typename T>
Pose2DNet<T>::Pose2DNet(const Pose2DConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const nn::ResNetConfig enc = config_.encoder_config();
  std::vector<int> single;
  for (int s = 0; s < config_.encoder_stages; ++s) single.push_back(enc.stage_channels(s));

  switch (config_.variant) {
    case Variant::kStereoShared: {
      encoder_ = std::make_unique<nn::ResNetEncoder<T>>("enc", enc, rng);
      if (!config_.weight_sharing) {
        right_encoder_ = std::make_unique<nn::ResNetEncoder<T>>("enc_right", enc, rng);
      }
      std::vector<int> fused;
      for (int c : single) fused.push_back(2 * c);
      decoder_ = std::make_unique<HeatmapDecoder<T>>("dec", fused, single, 2 * kJoints, config_.head_init_std, rng);
      break;
    }
    case Variant::kStereoDual:
      encoder_ = std::make_unique<nn::ResNetEncoder<T>>("enc", enc, rng);
      decoder_ = std::make_unique<HeatmapDecoder<T>>("dec", single, single, kJoints, config_.head_init_std, rng);
      right_encoder_ = std::make_unique<nn::ResNetEncoder<T>>("enc_right", enc, rng);
      right_decoder_ = std::make_unique<HeatmapDecoder<T>>("dec_right", single, single, kJoints, config_.head_init_std, rng);
      break;
    case Variant::kMonocular:
      encoder_ = std::make_unique<nn::ResNetEncoder<T>>("enc", enc, rng);
      decoder_ = std::make_unique<HeatmapDecoder<T>>("dec", single, single, kJoints, config_.head_init_std, rng);
      break;
  }

  if (!config_.pretrained_encoder.empty()) {
    const nn::Checkpoint ckpt = nn::load_checkpoint(config_.pretrained_encoder);
    load_pretrained(*encoder_, "enc", ckpt);
    if (right_encoder_) load_pretrained(*right_encoder_, "enc_right", ckpt);
  }
}

template <typename T>
Pose2DOutput<T> Pose2DNet<T>::forward(const nn::Tensor<T>& left, const nn::Tensor<T>& right) {
  check_input(left, config_, "left");
  Pose2DOutput<T> out;
  if (config_.variant == Variant::kMonocular) {
    out.left_features = encoder_->forward(left);
    out.left = decoder_->forward(out.left_features);
    return out;
  }
  check_input(right, config_, "right");
  out.left_features = encoder_->forward(left);
  out.right_features = right_encoder().forward(right);
  if (config_.variant == Variant::kStereoDual) {
    out.left = decoder_->forward(out.left_features);
    out.right = right_decoder_->forward(out.right_features);
    return out;
  }
  std::vector<nn::Tensor<T>> fused;
  for (std::size_t s = 0; s < out.left_features.size(); ++s) {
    fused.push_back(nn::concat_channels(out.left_features[s], out.right_features[s]));
  }
  nn::split_channels(decoder_->forward(fused), kJoints, out.left, out.right);
  return out;
}

template <typename T>
void Pose2DNet<T>::backward(const nn::Tensor<T>& grad_left, const nn::Tensor<T>& grad_right) {
  if (config_.variant == Variant::kMonocular) {
    encoder_->backward(decoder_->backward(grad_left));
    return;
  }
  if (config_.variant == Variant::kStereoDual) {
    right_encoder_->backward(right_decoder_->backward(grad_right));
    encoder_->backward(decoder_->backward(grad_left));
    return;
  }
  const std::vector<nn::Tensor<T>> fused = decoder_->backward(nn::concat_channels(grad_left, grad_right));
  std::vector<nn::Tensor<T>> gl(fused.size());
  std::vector<nn::Tensor<T>> gr(fused.size());
  for (std::size_t s = 0; s < fused.size(); ++s) {
    nn::split_channels(fused[s], fused[s].c / 2, gl[s], gr[s]);
  }
  // The right view went through the encoder last, so it unwinds first.
  right_encoder().backward(gr);
  encoder_->backward(gl);
}

template <typename T>
nn::ParameterList<T> Pose2DNet<T>::parameters() const {
  nn::ParameterList<T> p = encoder_parameters();
  decoder_->collect(p);
  if (right_decoder_) right_decoder_->collect(p);
  return p;
}

template <typename T>
nn::ParameterList<T> Pose2DNet<T>::encoder_parameters() const {
  nn::ParameterList<T> p;
  encoder_->collect(p);
  if (right_encoder_) right_encoder_->collect(p);
  return p;
}

template <typename T>
void Pose2DNet<T>::clear() {
  encoder_->clear();
  if (right_encoder_) right_encoder_->clear();
  decoder_->clear();
  if (right_decoder_) right_decoder_->clear();
}

template <typename T>
HeatmapStack to_heatmap_stack(const nn::Tensor<T>& t) {
  if (t.c != kJoints || t.h != t.w) throw ArgumentError("tensor is not a heatmap stack");
  std::vector<float> data(t.data.begin(), t.data.end());
  return HeatmapStack(t.h, std::move(data));
}

template <typename T>
nn::Tensor<T> from_heatmap_stack(const HeatmapStack& h) {
  nn::Tensor<T> t(kJoints, h.size(), h.size());
  std::copy(h.data().begin(), h.data().end(), t.data.begin());
  return t;
}

template nn::Tensor<float> image_to_tensor(const RgbImage&, const Pose2DConfig&);
template nn::Tensor<double> image_to_tensor(const RgbImage&, const Pose2DConfig&);
template class HeatmapDecoder<float>;
template class HeatmapDecoder<double>;
template class Pose2DNet<float>;
template class Pose2DNet<double>;
template HeatmapStack to_heatmap_stack(const nn::Tensor<float>&);
template HeatmapStack to_heatmap_stack(const nn::Tensor<double>&);
template nn::Tensor<float> from_heatmap_stack(const HeatmapStack&);
template nn::Tensor<double> from_heatmap_stack(const HeatmapStack&);

}  // namespace uego
