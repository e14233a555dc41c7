// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

#include "uego/core/skeleton.hpp"

namespace uego {

using JointMatrix = Eigen::Matrix<double, kJointCount, 3, Eigen::RowMajor>;

enum class PoseFrame { kDevice, kPelvis, kWorld };

std::string_view to_string(PoseFrame frame);
PoseFrame parse_pose_frame(std::string_view name);

/// 16 joint positions in centimeters, tagged with the frame they live in.
struct Pose3D {
  PoseFrame frame = PoseFrame::kDevice;
  JointMatrix joints = JointMatrix::Zero();

  Eigen::Vector3d joint(Joint j) const { return joints.row(index_of(j)).transpose(); }
  Eigen::Vector3d joint(int j) const { return joints.row(j).transpose(); }
  void set_joint(int j, const Eigen::Vector3d& p) { joints.row(j) = p.transpose(); }

  bool is_finite() const { return joints.allFinite(); }
  /// Length of each topology bone, in bone order.
  std::array<double, kBoneCount> bone_lengths() const;
  /// Midpoint of the two thigh joints.
  Eigen::Vector3d pelvis() const;

  bool operator==(const Pose3D& other) const {
    return frame == other.frame && joints == other.joints;
  }
};

struct Keypoint {
  double u = 0.0;
  double v = 0.0;
  bool visible = false;

  bool operator==(const Keypoint&) const = default;
};

/// One view's projected heatmap joints, in heatmap_subset order.
struct Keypoints2D {
  std::array<Keypoint, kHeatmapJointCount> points{};

  bool operator==(const Keypoints2D&) const = default;
  int visible_count() const;
};

struct StereoKeypoints {
  Keypoints2D left;
  Keypoints2D right;

  bool operator==(const StereoKeypoints&) const = default;
};

}  // namespace uego
