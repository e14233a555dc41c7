// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/model/pose3d_net.hpp"

#include <cmath>
#include <random>
#include <string>

#include "uego/core/error.hpp"

namespace uego {
namespace {

constexpr int kPoseValues = static_cast<int>(kJointCount) * 3;

nn::ConvOptions stride2(int in, int out, double gain) {
  nn::ConvOptions o;
  o.in = in;
  o.out = out;
  o.kernel = 4;
  o.stride = 2;
  o.pad = 1;
  o.gain = gain;
  return o;
}

double leaky_gain(double slope) { return std::sqrt(2.0 / (1.0 + slope * slope)); }

template <typename T>
void check_heatmaps(const nn::Tensor<T>& x, const Pose3DConfig& c, const char* which) {
  if (x.c != static_cast<int>(kHeatmapJointCount) || x.h != c.heatmap_size || x.w != c.heatmap_size) {
    throw ArgumentError(std::string(which) + " heatmaps must be 15x" + std::to_string(c.heatmap_size) + "x" +
                        std::to_string(c.heatmap_size) + ", got " + std::to_string(x.c) + "x" +
                        std::to_string(x.h) + "x" + std::to_string(x.w));
  }
}

}  // namespace

void Pose3DConfig::validate() const {
  if (views != 1 && views != 2) throw ArgumentError("pose3d views must be 1 or 2");
  if (encoder_stages < 1) throw ArgumentError("pose3d needs at least one encoder stage");
  if (heatmap_size < 2 || heatmap_size % (1 << encoder_stages) != 0) {
    throw ArgumentError("heatmap size " + std::to_string(heatmap_size) + " is not divisible by 2^" +
                        std::to_string(encoder_stages));
  }
  if (base_channels < 1 || embedding_dim < 1 || pose_hidden < 1) {
    throw ArgumentError("pose3d layer sizes must be positive");
  }
  if (!(output_scale_cm > 0.0)) throw ArgumentError("output scale must be positive");
  if (leaky_slope < 0.0 || leaky_slope >= 1.0) throw ArgumentError("leaky slope must be in [0, 1)");
  if (weights.pose < 0.0 || weights.cos < 0.0 || weights.hm < 0.0) {
    throw ArgumentError("loss weights must be non-negative");
  }
}

nlohmann::json to_json_value(const Pose3DConfig& c) {
  return {{"heatmap_size", c.heatmap_size},
          {"views", c.views},
          {"base_channels", c.base_channels},
          {"encoder_stages", c.encoder_stages},
          {"embedding_dim", c.embedding_dim},
          {"pose_hidden", c.pose_hidden},
          {"output_scale_cm", c.output_scale_cm},
          {"leaky_slope", c.leaky_slope},
          {"lambda_pose", c.weights.pose},
          {"lambda_cos", c.weights.cos},
          {"lambda_hm", c.weights.hm}};
}

Pose3DConfig pose3d_config_from_json(const nlohmann::json& j) {
  Pose3DConfig c;
  try {
    c.heatmap_size = j.value("heatmap_size", c.heatmap_size);
    c.views = j.value("views", c.views);
    c.base_channels = j.value("base_channels", c.base_channels);
    c.encoder_stages = j.value("encoder_stages", c.encoder_stages);
    c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
    c.pose_hidden = j.value("pose_hidden", c.pose_hidden);
    c.output_scale_cm = j.value("output_scale_cm", c.output_scale_cm);
    c.leaky_slope = j.value("leaky_slope", c.leaky_slope);
    c.weights.pose = j.value("lambda_pose", c.weights.pose);
    c.weights.cos = j.value("lambda_cos", c.weights.cos);
    c.weights.hm = j.value("lambda_hm", c.weights.hm);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad pose3d config: ") + e.what());
  }
  c.validate();
  return c;
}

template <typename T>
Pose3DNet<T>::Pose3DNet(const Pose3DConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const T slope = static_cast<T>(config_.leaky_slope);
  const double gain = leaky_gain(config_.leaky_slope);
  const int stages = config_.encoder_stages;
  const int bottom = config_.bottleneck_size();
  const int bottom_channels = config_.bottleneck_channels();
  const int flat = bottom_channels * bottom * bottom;

  int in = config_.input_channels();
  for (int s = 0; s < stages; ++s) {
    const int out = config_.base_channels << s;
    encoder_.add(std::make_unique<nn::Conv2d<T>>("enc.conv" + std::to_string(s + 1), stride2(in, out, gain), rng));
    encoder_.add(std::make_unique<nn::Activation<T>>(slope));
    in = out;
  }
  encoder_.add(std::make_unique<nn::Linear<T>>("enc.embed", flat, config_.embedding_dim, gain, rng));
  encoder_.add(std::make_unique<nn::Activation<T>>(slope));

  pose_branch_.add(std::make_unique<nn::Linear<T>>("pose.fc1", config_.embedding_dim, config_.pose_hidden, gain, rng));
  pose_branch_.add(std::make_unique<nn::Activation<T>>(slope));
  pose_branch_.add(std::make_unique<nn::Linear<T>>("pose.fc2", config_.pose_hidden, kPoseValues, 1.0, rng));

  heatmap_branch_.add(std::make_unique<nn::Linear<T>>("hm.fc", config_.embedding_dim, flat, gain, rng));
  heatmap_branch_.add(std::make_unique<nn::Activation<T>>(slope));
  heatmap_branch_.add(std::make_unique<nn::Reshape<T>>(bottom_channels, bottom, bottom));
  in = bottom_channels;
  for (int s = stages - 1; s >= 0; --s) {
    const bool last = s == 0;
    const int out = last ? config_.input_channels() : (config_.base_channels << (s - 1));
    heatmap_branch_.add(std::make_unique<nn::ConvTranspose2d<T>>(
        "hm.deconv" + std::to_string(stages - s), stride2(in, out, last ? 1.0 : gain), rng));
    if (!last) heatmap_branch_.add(std::make_unique<nn::Activation<T>>(slope));
    in = out;
  }
}

template <typename T>
Pose3DOutput<T> Pose3DNet<T>::forward(const nn::Tensor<T>& left, const nn::Tensor<T>& right) {
  check_heatmaps(left, config_, "left");
  nn::Tensor<T> input;
  if (config_.views == 2) {
    check_heatmaps(right, config_, "right");
    input = nn::concat_channels(left, right);
  } else {
    input = left;
  }
  const nn::Tensor<T> embedding = encoder_.forward(input);
  const nn::Tensor<T> raw_pose = pose_branch_.forward(embedding);
  const nn::Tensor<T> recon = heatmap_branch_.forward(embedding);

  Pose3DOutput<T> out;
  const T scale = static_cast<T>(config_.output_scale_cm);
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    for (int k = 0; k < 3; ++k) out.pose(j, k) = raw_pose.data[static_cast<std::size_t>(3 * j + k)] * scale;
  }
  if (config_.views == 2) {
    nn::split_channels(recon, static_cast<int>(kHeatmapJointCount), out.recon_left, out.recon_right);
  } else {
    out.recon_left = recon;
  }
  return out;
}

template <typename T>
std::pair<nn::Tensor<T>, nn::Tensor<T>> Pose3DNet<T>::backward(const PoseMatrix<T>& grad_pose,
                                                              const nn::Tensor<T>& grad_recon_left,
                                                              const nn::Tensor<T>& grad_recon_right) {
  const T scale = static_cast<T>(config_.output_scale_cm);
  nn::Tensor<T> g_raw(kPoseValues, 1, 1);
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    for (int k = 0; k < 3; ++k) g_raw.data[static_cast<std::size_t>(3 * j + k)] = grad_pose(j, k) * scale;
  }
  const nn::Tensor<T> g_recon =
      config_.views == 2 ? nn::concat_channels(grad_recon_left, grad_recon_right) : grad_recon_left;
  nn::Tensor<T> g_embed = heatmap_branch_.backward(g_recon);
  nn::add_inplace(g_embed, pose_branch_.backward(g_raw));
  const nn::Tensor<T> g_input = encoder_.backward(g_embed);
  std::pair<nn::Tensor<T>, nn::Tensor<T>> result;
  if (config_.views == 2) {
    nn::split_channels(g_input, static_cast<int>(kHeatmapJointCount), result.first, result.second);
  } else {
    result.first = g_input;
  }
  return result;
}

template <typename T>
nn::ParameterList<T> Pose3DNet<T>::parameters() const {
  nn::ParameterList<T> p;
  encoder_.collect(p);
  pose_branch_.collect(p);
  heatmap_branch_.collect(p);
  return p;
}

template <typename T>
void Pose3DNet<T>::clear() {
  encoder_.clear();
  pose_branch_.clear();
  heatmap_branch_.clear();
}

Pose3D to_pose(const PoseMatrix<float>& m, PoseFrame frame) {
  Pose3D p;
  p.frame = frame;
  p.joints = m.cast<double>();
  return p;
}

Pose3D to_pose(const PoseMatrix<double>& m, PoseFrame frame) {
  Pose3D p;
  p.frame = frame;
  p.joints = m;
  return p;
}

template class Pose3DNet<float>;
template class Pose3DNet<double>;

}  // namespace uego
