// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "uego/core/pose.hpp"
#include "uego/synth/character.hpp"

namespace uego {

/// Local rotation at each joint. The entry for joint j rotates the bone from
/// parent(j) to j (and everything below j) in the parent's frame; the root
/// entry is ignored in favour of the root rotation.
using JointRotations = std::array<Eigen::Matrix3d, kJointCount>;

JointRotations identity_rotations();

/// Anatomical angles (radians) to a rotation, R = Rx(pitch) Ry(roll) Rz(yaw).
/// Right-side joints mirror roll and yaw so the same numbers mean the same
/// movement on either side.
Eigen::Matrix3d joint_rotation(int joint, double pitch, double roll, double yaw);

struct BodyState {
  Pose3D pose{PoseFrame::kWorld};
  /// Frame orientation of each joint in the world.
  std::array<Eigen::Matrix3d, kJointCount> global_rotation{};
};

/// Composes parent-to-child rigid transforms down the skeleton tree.
BodyState forward_kinematics(const CharacterProfile& profile, const JointRotations& local,
                             const Eigen::Matrix3d& root_rotation,
                             const Eigen::Vector3d& root_position);

/// Lowest surface point of a posed body (joint height minus capsule radius).
double lowest_vertex(const BodyState& body, const CharacterProfile& profile);

/// Glasses frame in the world: origin between the two cameras, x right,
/// y down, z forward, attached rigidly to the head.
Eigen::Isometry3d world_from_device(const BodyState& body, const CharacterProfile& profile);

/// Re-expresses a world-frame pose in another frame given target_from_world.
Pose3D transform_pose(const Pose3D& pose, const Eigen::Isometry3d& target_from_world,
                      PoseFrame target);

}  // namespace uego
