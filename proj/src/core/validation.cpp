// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uego/camera/fisheye.hpp"
#include "uego/core/error.hpp"

namespace uego {
namespace {

// Camera poses and joints are stored with full double precision, so the two
// routes into a camera frame agree far below this.
constexpr double kPoseConsistencyCm = 1e-6;

double residual(const Keypoint& a, const Keypoint& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

}  // namespace

ValidationReport validate_frame(const FrameRecord& record, const StereoRig& rig, double tolerance_px) {
  ValidationReport report;
  if (!record.left_camera_pose) report.issues.push_back("missing field: camera_poses.left");
  if (!record.right_camera_pose) report.issues.push_back("missing field: camera_poses.right");
  if (record.joints_device.frame != PoseFrame::kDevice) {
    report.issues.push_back("missing field: joints_device is not tagged as device frame");
  }
  if (!report.issues.empty()) {
    report.status = ValidationStatus::kMissingField;
    return report;
  }

  const StereoKeypoints expected = project_pose(record.joints_device, rig);
  const Keypoints2D* stored[2] = {&record.keypoints.left, &record.keypoints.right};
  const Keypoints2D* fresh[2] = {&expected.left, &expected.right};
  for (int v = 0; v < 2; ++v) {
    for (std::size_t k = 0; k < kHeatmapJointCount; ++k) {
      const Keypoint& s = stored[v]->points[k];
      const Keypoint& e = fresh[v]->points[k];
      if (s.visible != e.visible) {
        report.issues.push_back("visibility mismatch at view " + std::to_string(v) + " keypoint " +
                                std::to_string(k));
        report.max_residual_px = std::max(report.max_residual_px,
                                          std::numeric_limits<double>::infinity());
        continue;
      }
      if (!e.visible) continue;
      const double r = residual(s, e);
      report.max_residual_px = std::max(report.max_residual_px, r);
      if (r > tolerance_px) {
        report.issues.push_back("keypoint " + std::to_string(k) + " in view " + std::to_string(v) +
                                " off by " + std::to_string(r) + " px");
      }
    }
  }
  if (report.max_residual_px > tolerance_px) {
    report.status = ValidationStatus::kResidualExceeded;
    return report;
  }

  const Eigen::Matrix4d* poses[2] = {&*record.left_camera_pose, &*record.right_camera_pose};
  for (int v = 0; v < 2; ++v) {
    const Eigen::Matrix4d cam_from_world = poses[v]->inverse();
    const Eigen::Isometry3d cam_from_dev = rig.camera_from_device(static_cast<View>(v));
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const Eigen::Vector4d pw = record.joints_world.joint(static_cast<int>(j)).homogeneous();
      const Eigen::Vector3d via_world = (cam_from_world * pw).head<3>();
      const Eigen::Vector3d via_device = cam_from_dev * record.joints_device.joint(static_cast<int>(j));
      if ((via_world - via_device).norm() > kPoseConsistencyCm * std::max(1.0, via_device.norm())) {
        report.status = ValidationStatus::kInconsistentPose;
        report.issues.push_back("camera pose " + std::to_string(v) +
                                " does not map world joints onto device joints");
        return report;
      }
    }
  }
  return report;
}

ValidationReport validate_frame_file(const std::filesystem::path& path, const StereoRig& rig,
                                     double tolerance_px) {
  try {
    return validate_frame(load_frame_record(path), rig, tolerance_px);
  } catch (const DataError& e) {
    ValidationReport report;
    report.status = ValidationStatus::kMissingField;
    report.issues.push_back(e.what());
    return report;
  }
}

}  // namespace uego
