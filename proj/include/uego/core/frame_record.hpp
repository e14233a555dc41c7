// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "uego/core/pose.hpp"

namespace uego {

/// Metadata for one stereo frame. Camera poses are world_from_camera 4x4
/// rigid transforms acting on column vectors; on disk each matrix is a list
/// of its four rows.
struct FrameRecord {
  int frame_id = 0;
  std::string motion_id;
  std::string motion_category;
  std::string left_image;
  std::string right_image;
  std::optional<Eigen::Matrix4d> left_camera_pose;
  std::optional<Eigen::Matrix4d> right_camera_pose;
  Pose3D joints_world{PoseFrame::kWorld};
  Pose3D joints_device{PoseFrame::kDevice};
  StereoKeypoints keypoints;

  bool operator==(const FrameRecord& other) const;
};

nlohmann::json to_json_value(const FrameRecord& record);
/// Throws DataError on malformed input. Absent camera poses stay empty so
/// validation can report them.
FrameRecord frame_record_from_json(const nlohmann::json& j);

void save_frame_record(const FrameRecord& record, const std::filesystem::path& path);
FrameRecord load_frame_record(const std::filesystem::path& path);

}  // namespace uego
