// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/train/dataset.hpp"

#include "uego/camera/heatmaps.hpp"
#include "uego/core/error.hpp"
#include "uego/core/image.hpp"

namespace uego {
namespace {

std::size_t sample_bytes(const Pose2DConfig& c) {
  const std::size_t image = 3ULL * c.image_size * c.image_size;
  const std::size_t heatmaps = kHeatmapJointCount * static_cast<std::size_t>(c.heatmap_size) * c.heatmap_size;
  return 2 * (image + heatmaps) * sizeof(float);
}

}  // namespace

Keypoints2D rescale_keypoints(const Keypoints2D& k, int from_size, int to_size) {
  if (from_size == to_size) return k;
  const double s = static_cast<double>(to_size) / from_size;
  Keypoints2D out = k;
  for (Keypoint& p : out.points) {
    p.u *= s;
    p.v *= s;
  }
  return out;
}

FrameDataset FrameDataset::open(const std::filesystem::path& root, Split split, int max_frames) {
  const DatasetManifest m = load_manifest(manifest_path(root, split), root, true);
  std::vector<std::string> paths;
  for (const ClipEntry& clip : m.clips) {
    for (const std::string& f : clip.frames) paths.push_back(f);
  }
  std::vector<std::size_t> keep;
  if (max_frames > 0 && static_cast<std::size_t>(max_frames) < paths.size()) {
    for (int i = 0; i < max_frames; ++i) keep.push_back(i * paths.size() / static_cast<std::size_t>(max_frames));
  } else {
    for (std::size_t i = 0; i < paths.size(); ++i) keep.push_back(i);
  }
  std::vector<FrameRecord> records;
  records.reserve(keep.size());
  for (std::size_t i : keep) records.push_back(load_frame_record(root / paths[i]));
  return from_records(root, std::move(records));
}

FrameDataset FrameDataset::from_records(const std::filesystem::path& root, std::vector<FrameRecord> records) {
  FrameDataset d;
  d.root_ = root;
  d.records_ = std::move(records);
  d.cache_.assign(d.records_.size(), nullptr);
  d.native_size_.assign(d.records_.size(), 0);
  return d;
}

void FrameDataset::configure(const Pose2DConfig& config, double heatmap_sigma, int cache_mb) {
  const bool changed = config.image_size != config_.image_size || config.heatmap_size != config_.heatmap_size ||
                       config.mean != config_.mean || config.stddev != config_.stddev || heatmap_sigma != sigma_;
  config_ = config;
  sigma_ = heatmap_sigma;
  cache_limit_ = static_cast<std::size_t>(cache_mb) * (1ULL << 20) / sample_bytes(config);
  if (changed) {
    cache_.assign(records_.size(), nullptr);
    cached_ = 0;
  }
}

Keypoints2D FrameDataset::scaled_keypoints(std::size_t i, bool right) const {
  const FrameRecord& r = records_.at(i);
  int native = native_size_.at(i);
  if (native == 0) {
    native = read_png(root_ / r.left_image).width;
    native_size_[i] = native;
  }
  return rescale_keypoints(right ? r.keypoints.right : r.keypoints.left, native, config_.image_size);
}

TrainingSample FrameDataset::sample(std::size_t i) const {
  if (cache_.at(i)) return *cache_[i];
  const FrameRecord& r = records_.at(i);
  const RgbImage left = read_png(root_ / r.left_image);
  const RgbImage right = read_png(root_ / r.right_image);
  if (left.width != left.height || right.width != left.width || right.height != left.height) {
    throw DataError("frame " + r.motion_id + "/" + std::to_string(r.frame_id) + " has mismatched image sizes");
  }
  native_size_[i] = left.width;
  TrainingSample s;
  s.left = image_to_tensor<float>(resize_image(left, config_.image_size), config_);
  s.right = image_to_tensor<float>(resize_image(right, config_.image_size), config_);
  const auto kl = rescale_keypoints(r.keypoints.left, left.width, config_.image_size);
  const auto kr = rescale_keypoints(r.keypoints.right, left.width, config_.image_size);
  s.heatmaps_left = from_heatmap_stack<float>(render_heatmaps(kl, config_.image_size, config_.heatmap_size, sigma_));
  s.heatmaps_right = from_heatmap_stack<float>(render_heatmaps(kr, config_.image_size, config_.heatmap_size, sigma_));
  s.pose = r.joints_device.joints.cast<float>();

  if (cached_ < cache_limit_) {
    cache_[i] = std::make_shared<const TrainingSample>(s);
    ++cached_;
  }
  return s;
}

}  // namespace uego
