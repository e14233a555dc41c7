// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/kinematics.hpp"

#include <algorithm>

#include "uego/core/error.hpp"

namespace uego {
namespace {

// Topological order (parents first) over the joint tree.
constexpr std::array<int, kJointCount - 1> kChildOrder = {0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};

// Eye point relative to the head joint, body frame, for a 171 cm reference.
const Eigen::Vector3d kGlassesOffset(0.0, 9.0, 7.0);

}  // namespace

JointRotations identity_rotations() {
  JointRotations r;
  r.fill(Eigen::Matrix3d::Identity());
  return r;
}

Eigen::Matrix3d joint_rotation(int joint, double pitch, double roll, double yaw) {
  const double mirror = joint >= index_of(Joint::kUpperArmR) ? -1.0 : 1.0;
  return (Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitX()) *
          Eigen::AngleAxisd(mirror * roll, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(mirror * yaw, Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

BodyState forward_kinematics(const CharacterProfile& profile, const JointRotations& local,
                             const Eigen::Matrix3d& root_rotation,
                             const Eigen::Vector3d& root_position) {
  const auto& topo = build_topology();
  BodyState out;
  const int root = topo.root();
  out.global_rotation[root] = root_rotation;
  out.pose.set_joint(root, root_position);
  for (int j : kChildOrder) {
    const int p = topo.parent_index[j];
    const Eigen::Matrix3d g = out.global_rotation[p] * local[j];
    out.global_rotation[j] = g;
    out.pose.set_joint(j, out.pose.joint(p) + g * (profile.bone_length[j] * rest_direction(j)));
  }
  return out;
}

double lowest_vertex(const BodyState& body, const CharacterProfile& profile) {
  double lowest = body.pose.joints(0, 2) - profile.radius[0];
  for (std::size_t j = 1; j < kJointCount; ++j) {
    lowest = std::min(lowest, body.pose.joints(j, 2) - profile.radius[j]);
  }
  return lowest;
}

Eigen::Isometry3d world_from_device(const BodyState& body, const CharacterProfile& profile) {
  const int head = index_of(Joint::kHead);
  // Columns: device x, y, z expressed in body axes.
  Eigen::Matrix3d body_from_device;
  body_from_device << 1.0, 0.0, 0.0,
                      0.0, 0.0, 1.0,
                      0.0, -1.0, 0.0;
  const double scale = profile.bone_length[head] / 12.0;
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() = body.global_rotation[head] * body_from_device;
  t.translation() = body.pose.joint(head) + body.global_rotation[head] * (scale * kGlassesOffset);
  return t;
}

Pose3D transform_pose(const Pose3D& pose, const Eigen::Isometry3d& target_from_world,
                      PoseFrame target) {
  if (pose.frame != PoseFrame::kWorld) throw ArgumentError("transform_pose expects a world-frame pose");
  Pose3D out;
  out.frame = target;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    out.set_joint(static_cast<int>(j), target_from_world * pose.joint(static_cast<int>(j)));
  }
  return out;
}

}  // namespace uego
