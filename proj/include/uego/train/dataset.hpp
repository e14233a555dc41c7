// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uego/core/frame_record.hpp"
#include "uego/core/manifest.hpp"
#include "uego/model/losses.hpp"
#include "uego/model/pose2d_net.hpp"
#include "uego/nn/tensor.hpp"

namespace uego {

/// Network-ready view of one stereo frame.
struct TrainingSample {
  nn::Tensor<float> left, right;
  nn::Tensor<float> heatmaps_left, heatmaps_right;
  PoseMatrix<float> pose;
};

/// Lazily decoded frames of one split. Images are converted to the network's
/// input size; ground-truth heatmaps are rendered from the stored keypoints.
class FrameDataset {
 public:
  /// Reads the split manifest and every frame record. Throws DataError when
  /// the manifest or a referenced file is missing. `max_frames` > 0 keeps an
  /// evenly strided subset.
  static FrameDataset open(const std::filesystem::path& root, Split split, int max_frames = 0);
  /// Builds a dataset from records already in memory (paths relative to `root`).
  static FrameDataset from_records(const std::filesystem::path& root, std::vector<FrameRecord> records);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const FrameRecord& record(std::size_t i) const { return records_.at(i); }
  const std::filesystem::path& root() const { return root_; }

  /// Configures decoding; clears any cached samples when the layout changes.
  void configure(const Pose2DConfig& config, double heatmap_sigma, int cache_mb);
  TrainingSample sample(std::size_t i) const;
  /// Ground-truth keypoints scaled to the network input resolution.
  Keypoints2D scaled_keypoints(std::size_t i, bool right) const;

 private:
  std::filesystem::path root_;
  std::vector<FrameRecord> records_;
  Pose2DConfig config_;
  double sigma_ = 2.0;
  std::size_t cache_limit_ = 0;
  mutable std::vector<std::shared_ptr<const TrainingSample>> cache_;
  mutable std::size_t cached_ = 0;
  mutable std::vector<int> native_size_;
};

/// Scales pixel keypoints from an image of `from_size` to one of `to_size`,
/// keeping pixel-center conventions (u' = u * to / from).
Keypoints2D rescale_keypoints(const Keypoints2D& k, int from_size, int to_size);

}  // namespace uego
