// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/pose.hpp"

#include <string>

#include "uego/core/error.hpp"

namespace uego {

std::string_view to_string(PoseFrame frame) {
  switch (frame) {
    case PoseFrame::kDevice: return "device";
    case PoseFrame::kPelvis: return "pelvis";
    case PoseFrame::kWorld: return "world";
  }
  return "device";
}

PoseFrame parse_pose_frame(std::string_view name) {
  if (name == "device") return PoseFrame::kDevice;
  if (name == "pelvis") return PoseFrame::kPelvis;
  if (name == "world") return PoseFrame::kWorld;
  throw ArgumentError("unknown pose frame '" + std::string(name) + "'");
}

std::array<double, kBoneCount> Pose3D::bone_lengths() const {
  std::array<double, kBoneCount> out{};
  const auto& bones = build_topology().bones;
  for (std::size_t b = 0; b < kBoneCount; ++b) {
    out[b] = (joint(bones[b].child) - joint(bones[b].parent)).norm();
  }
  return out;
}

Eigen::Vector3d Pose3D::pelvis() const {
  return 0.5 * (joint(Joint::kThighL) + joint(Joint::kThighR));
}

int Keypoints2D::visible_count() const {
  int n = 0;
  for (const auto& p : points) n += p.visible ? 1 : 0;
  return n;
}

}  // namespace uego
