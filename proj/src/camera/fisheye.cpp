// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/camera/fisheye.hpp"

#include <cmath>

#include "uego/core/error.hpp"
#include "uego/core/json_io.hpp"

namespace uego {

void FisheyeIntrinsics::validate() const {
  if (image_size <= 0) throw ArgumentError("image size must be positive");
  if (!(fov > 0.0 && fov < EIGEN_PI)) throw ArgumentError("field of view must lie in (0, pi)");
}

Projection project(const Eigen::Vector3d& p, const FisheyeIntrinsics& intr) {
  const double planar = std::hypot(p.x(), p.y());
  if (planar == 0.0 && p.z() == 0.0) throw DomainError("cannot project the camera center");
  Projection out;
  out.theta = std::atan2(planar, p.z());
  const double r = intr.focal() * out.theta;
  double du = 0.0;
  double dv = 0.0;
  if (planar > 0.0) {
    du = p.x() / planar;
    dv = p.y() / planar;
  }
  out.u = intr.center() + r * du;
  out.v = intr.center() + r * dv;
  out.visible = out.theta <= 0.5 * intr.fov;
  return out;
}

nlohmann::json to_json_value(const RigConfig& c) {
  return {{"baseline_cm", c.baseline_cm}, {"fov_deg", c.fov_deg},
          {"image_size", c.image_size},   {"heatmap_size", c.heatmap_size},
          {"sigma", c.sigma},             {"pitch_deg", c.pitch_deg}};
}

RigConfig rig_config_from_json(const nlohmann::json& j) {
  RigConfig c;
  try {
    c.baseline_cm = j.value("baseline_cm", c.baseline_cm);
    c.fov_deg = j.value("fov_deg", c.fov_deg);
    c.image_size = j.value("image_size", c.image_size);
    c.heatmap_size = j.value("heatmap_size", c.heatmap_size);
    c.sigma = j.value("sigma", c.sigma);
    c.pitch_deg = j.value("pitch_deg", c.pitch_deg);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad rig config: ") + e.what());
  }
  return c;
}

RigConfig load_rig_config(const std::filesystem::path& path) {
  return rig_config_from_json(read_json_file(path));
}

StereoRig::StereoRig(const RigConfig& config) : config_(config) {
  if (!(config.baseline_cm > 0.0)) throw ArgumentError("baseline must be positive");
  if (config.heatmap_size <= 0) throw ArgumentError("heatmap size must be positive");
  if (!(config.sigma > 0.0)) throw ArgumentError("sigma must be positive");
  intrinsics_.image_size = config.image_size;
  intrinsics_.fov = config.fov_deg * EIGEN_PI / 180.0;
  intrinsics_.validate();
  // Pitching down turns the optical axis (0, 0, 1) towards +y.
  const Eigen::Matrix3d pitch =
      Eigen::AngleAxisd(-config.pitch_deg * EIGEN_PI / 180.0, Eigen::Vector3d::UnitX())
          .toRotationMatrix();
  for (int v = 0; v < 2; ++v) {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.linear() = pitch;
    t.translation() = Eigen::Vector3d((v == 0 ? -0.5 : 0.5) * config.baseline_cm, 0.0, 0.0);
    device_from_camera_[v] = t;
  }
}

Keypoints2D project_pose_view(const Pose3D& pose, const StereoRig& rig, View view) {
  if (pose.frame != PoseFrame::kDevice) throw ArgumentError("project_pose expects a device-frame pose");
  const Eigen::Isometry3d cam_from_dev = rig.camera_from_device(view);
  const auto& subset = build_topology().heatmap_subset;
  Keypoints2D out;
  for (std::size_t k = 0; k < kHeatmapJointCount; ++k) {
    const Eigen::Vector3d pc = cam_from_dev * pose.joint(subset[k]);
    try {
      const Projection p = project(pc, rig.intrinsics());
      out.points[k] = Keypoint{p.u, p.v, p.visible};
    } catch (const DomainError&) {
      out.points[k] = Keypoint{};
    }
  }
  return out;
}

StereoKeypoints project_pose(const Pose3D& pose, const StereoRig& rig) {
  return {project_pose_view(pose, rig, View::kLeft), project_pose_view(pose, rig, View::kRight)};
}

}  // namespace uego
