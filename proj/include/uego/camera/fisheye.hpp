// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "uego/core/pose.hpp"

namespace uego {

/// Equidistant fisheye, r = f * theta, principal point at the image center.
/// Pixel (i, j) covers [i, i+1) x [j, j+1), so the center is image_size / 2.
struct FisheyeIntrinsics {
  int image_size = 256;
  double fov = 170.0 * EIGEN_PI / 180.0;

  double center() const { return 0.5 * image_size; }
  /// Radius of the inscribed image circle.
  double radius() const { return 0.5 * image_size; }
  /// Pixels per radian; maps theta = fov / 2 onto the inscribed circle.
  double focal() const { return radius() / (0.5 * fov); }
  /// Throws ArgumentError unless 0 < fov < pi and image_size > 0.
  void validate() const;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  /// Angle from the optical axis, radians.
  double theta = 0.0;
  bool visible = false;
};

/// Projects a camera-frame point (x right, y down, z along the optical axis).
/// Throws DomainError for the zero vector.
Projection project(const Eigen::Vector3d& point_cam, const FisheyeIntrinsics& intrinsics);

enum class View { kLeft = 0, kRight = 1 };

struct RigConfig {
  double baseline_cm = 12.0;
  double fov_deg = 170.0;
  int image_size = 256;
  int heatmap_size = 64;
  /// Gaussian sigma in heatmap pixels.
  double sigma = 2.0;
  /// Downward pitch of both cameras relative to the glasses frame.
  double pitch_deg = 30.0;

  bool operator==(const RigConfig&) const = default;
};

nlohmann::json to_json_value(const RigConfig& config);
RigConfig rig_config_from_json(const nlohmann::json& j);
RigConfig load_rig_config(const std::filesystem::path& path);

/// Two fisheye cameras on a glasses frame. The device origin is the midpoint
/// between the cameras; device axes are x right, y down, z forward. The left
/// camera sits at x = -baseline / 2.
class StereoRig {
 public:
  StereoRig() : StereoRig(RigConfig{}) {}
  explicit StereoRig(const RigConfig& config);

  const RigConfig& config() const { return config_; }
  const FisheyeIntrinsics& intrinsics() const { return intrinsics_; }
  double baseline() const { return config_.baseline_cm; }

  const Eigen::Isometry3d& device_from_camera(View view) const {
    return device_from_camera_[static_cast<int>(view)];
  }
  Eigen::Isometry3d camera_from_device(View view) const {
    return device_from_camera(view).inverse();
  }
  Eigen::Vector3d camera_center(View view) const {
    return device_from_camera(view).translation();
  }

 private:
  RigConfig config_;
  FisheyeIntrinsics intrinsics_;
  Eigen::Isometry3d device_from_camera_[2];
};

/// Projects the heatmap joints of a device-frame pose into one view.
/// Joints at a camera center come back invisible.
Keypoints2D project_pose_view(const Pose3D& pose, const StereoRig& rig, View view);
StereoKeypoints project_pose(const Pose3D& pose, const StereoRig& rig);

}  // namespace uego
