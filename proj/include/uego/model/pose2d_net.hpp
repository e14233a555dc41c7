// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "uego/core/heatmap.hpp"
#include "uego/core/image.hpp"
#include "uego/nn/layers.hpp"
#include "uego/nn/resnet.hpp"

namespace uego {

enum class Variant {
  /// One encoder applied to both views, features fused in a single decoder.
  kStereoShared,
  /// Two independent single-view encoder-decoders.
  kStereoDual,
  /// Left view only.
  kMonocular,
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct Pose2DConfig {
  int backbone_depth = 18;
  /// Only meaningful for the stereo-shared variant; off gives each view its
  /// own encoder while keeping the fused decoder.
  bool weight_sharing = true;
  Variant variant = Variant::kStereoShared;
  int base_width = 16;
  int encoder_stages = 4;
  /// Per-stage block counts overriding the depth's defaults.
  std::vector<int> blocks;
  int image_size = 256;
  int heatmap_size = 64;
  std::array<double, 3> mean{0.485, 0.456, 0.406};
  std::array<double, 3> stddev{0.229, 0.224, 0.225};
  /// Optional checkpoint whose encoder tensors seed the encoder(s).
  std::string pretrained_encoder;
  bool zero_init_residual = true;
  /// Standard deviation of the 1x1 heatmap head weights at initialisation.
  /// 0 selects the He-scaled default used by the other convolutions.
  double head_init_std = 1e-3;

  /// Throws ArgumentError for inconsistent sizes or unsupported depths.
  void validate() const;
  int views() const { return variant == Variant::kMonocular ? 1 : 2; }
  nn::ResNetConfig encoder_config() const;
};

nlohmann::json to_json_value(const Pose2DConfig& c);
Pose2DConfig pose2d_config_from_json(const nlohmann::json& j);

/// Normalized (3, H, W) network input from an 8-bit image.
template <typename T>
nn::Tensor<T> image_to_tensor(const RgbImage& image, const Pose2DConfig& config);

/// Bilinear resize for images rendered at a different resolution.
RgbImage resize_image(const RgbImage& image, int size);

template <typename T>
struct Pose2DOutput {
  nn::Tensor<T> left;
  /// Empty for the monocular variant.
  nn::Tensor<T> right;
  std::vector<nn::Tensor<T>> left_features;
  std::vector<nn::Tensor<T>> right_features;
};

/// U-Net style decoder: starting from the deepest skip it repeatedly upsamples
/// by two, concatenates the next shallower skip and applies two 3x3
/// convolutions, then a 1x1 head.
template <typename T>
class HeatmapDecoder {
 public:
  HeatmapDecoder(const std::string& name, const std::vector<int>& skip_channels,
                 const std::vector<int>& stage_channels, int out_channels, double head_init_std,
                 std::mt19937_64& rng);
  nn::Tensor<T> forward(const std::vector<nn::Tensor<T>>& skips);
  std::vector<nn::Tensor<T>> backward(const nn::Tensor<T>& grad_out);
  void collect(nn::ParameterList<T>& out) const;
  void clear();

 private:
  struct Stage {
    nn::Upsample2x<T> up;
    nn::Sequential<T> convs;
    int up_channels = 0;
  };
  std::vector<std::unique_ptr<Stage>> stages_;
  std::unique_ptr<nn::Conv2d<T>> head_;
};

template <typename T>
class Pose2DNet {
 public:
  Pose2DNet(const Pose2DConfig& config, std::uint64_t seed);

  /// Inputs shaped (3, image_size, image_size); `right` is ignored by the
  /// monocular variant. Throws ArgumentError on shape mismatch.
  Pose2DOutput<T> forward(const nn::Tensor<T>& left, const nn::Tensor<T>& right);
  /// Gradients for the heatmaps of the last forward call.
  void backward(const nn::Tensor<T>& grad_left, const nn::Tensor<T>& grad_right);

  nn::ParameterList<T> parameters() const;
  nn::ParameterList<T> encoder_parameters() const;
  const Pose2DConfig& config() const { return config_; }
  void clear();

  /// True when both views run through the very same encoder object.
  bool shares_encoder() const { return right_encoder_ == nullptr && variant_uses_fusion(); }

 private:
  bool variant_uses_fusion() const { return config_.variant == Variant::kStereoShared; }
  nn::ResNetEncoder<T>& right_encoder() { return right_encoder_ ? *right_encoder_ : *encoder_; }

  Pose2DConfig config_;
  std::unique_ptr<nn::ResNetEncoder<T>> encoder_;
  std::unique_ptr<nn::ResNetEncoder<T>> right_encoder_;
  std::unique_ptr<HeatmapDecoder<T>> decoder_;
  std::unique_ptr<HeatmapDecoder<T>> right_decoder_;
};

template <typename T>
HeatmapStack to_heatmap_stack(const nn::Tensor<T>& t);
template <typename T>
nn::Tensor<T> from_heatmap_stack(const HeatmapStack& h);

}  // namespace uego
