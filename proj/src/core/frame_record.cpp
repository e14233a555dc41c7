// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/frame_record.hpp"

#include "uego/core/error.hpp"
#include "uego/core/json_io.hpp"

namespace uego {
namespace {

using nlohmann::json;

json matrix4_to_json(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  return rows;
}

Eigen::Matrix4d matrix4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw DataError("camera pose must have 4 rows");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    if (!j[r].is_array() || j[r].size() != 4) throw DataError("camera pose row must have 4 values");
    for (int c = 0; c < 4; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json pose_to_json(const Pose3D& pose) {
  json out;
  out["frame"] = std::string(to_string(pose.frame));
  json joints = json::object();
  const auto& names = build_topology().joint_names;
  for (std::size_t j = 0; j < kJointCount; ++j) {
    joints[std::string(names[j])] = {pose.joints(j, 0), pose.joints(j, 1), pose.joints(j, 2)};
  }
  out["joints"] = std::move(joints);
  return out;
}

Pose3D pose_from_json(const json& j) {
  Pose3D pose;
  pose.frame = parse_pose_frame(j.at("frame").get<std::string>());
  const json& joints = j.at("joints");
  const auto& names = build_topology().joint_names;
  for (std::size_t k = 0; k < kJointCount; ++k) {
    const json& p = joints.at(std::string(names[k]));
    if (!p.is_array() || p.size() != 3) throw DataError("joint must have 3 coordinates");
    for (int c = 0; c < 3; ++c) pose.joints(k, c) = p[c].get<double>();
  }
  return pose;
}

json keypoints_to_json(const Keypoints2D& kps) {
  json out = json::array();
  for (const auto& p : kps.points) out.push_back({{"u", p.u}, {"v", p.v}, {"visible", p.visible}});
  return out;
}

Keypoints2D keypoints_from_json(const json& j) {
  Keypoints2D kps;
  if (!j.is_array() || j.size() != kHeatmapJointCount) {
    throw DataError("keypoint list must have 15 entries");
  }
  for (std::size_t k = 0; k < kHeatmapJointCount; ++k) {
    kps.points[k].u = j[k].at("u").get<double>();
    kps.points[k].v = j[k].at("v").get<double>();
    kps.points[k].visible = j[k].at("visible").get<bool>();
  }
  return kps;
}

}  // namespace

bool FrameRecord::operator==(const FrameRecord& o) const {
  return frame_id == o.frame_id && motion_id == o.motion_id &&
         motion_category == o.motion_category && left_image == o.left_image &&
         right_image == o.right_image && left_camera_pose == o.left_camera_pose &&
         right_camera_pose == o.right_camera_pose && joints_world == o.joints_world &&
         joints_device == o.joints_device && keypoints == o.keypoints;
}

nlohmann::json to_json_value(const FrameRecord& r) {
  json out;
  out["frame_id"] = r.frame_id;
  out["motion_id"] = r.motion_id;
  out["motion_category"] = r.motion_category;
  out["images"] = {{"left", r.left_image}, {"right", r.right_image}};
  json cameras = json::object();
  if (r.left_camera_pose) cameras["left"] = matrix4_to_json(*r.left_camera_pose);
  if (r.right_camera_pose) cameras["right"] = matrix4_to_json(*r.right_camera_pose);
  out["camera_poses"] = std::move(cameras);
  out["joints_world"] = pose_to_json(r.joints_world);
  out["joints_device"] = pose_to_json(r.joints_device);
  out["keypoints"] = {{"left", keypoints_to_json(r.keypoints.left)},
                      {"right", keypoints_to_json(r.keypoints.right)}};
  return out;
}

FrameRecord frame_record_from_json(const nlohmann::json& j) {
  try {
    FrameRecord r;
    r.frame_id = j.at("frame_id").get<int>();
    r.motion_id = j.at("motion_id").get<std::string>();
    r.motion_category = j.at("motion_category").get<std::string>();
    r.left_image = j.at("images").at("left").get<std::string>();
    r.right_image = j.at("images").at("right").get<std::string>();
    if (j.contains("camera_poses")) {
      const json& cams = j.at("camera_poses");
      if (cams.contains("left")) r.left_camera_pose = matrix4_from_json(cams.at("left"));
      if (cams.contains("right")) r.right_camera_pose = matrix4_from_json(cams.at("right"));
    }
    r.joints_world = pose_from_json(j.at("joints_world"));
    r.joints_device = pose_from_json(j.at("joints_device"));
    r.keypoints.left = keypoints_from_json(j.at("keypoints").at("left"));
    r.keypoints.right = keypoints_from_json(j.at("keypoints").at("right"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed frame record: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(std::string("malformed frame record: ") + e.what());
  }
}

void save_frame_record(const FrameRecord& record, const std::filesystem::path& path) {
  write_json_file(to_json_value(record), path);
}

FrameRecord load_frame_record(const std::filesystem::path& path) {
  return frame_record_from_json(read_json_file(path));
}

}  // namespace uego
