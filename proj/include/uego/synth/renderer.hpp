// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Geometry>

#include "uego/camera/fisheye.hpp"
#include "uego/core/frame_record.hpp"
#include "uego/core/image.hpp"
#include "uego/synth/character.hpp"

namespace uego {

/// Another character in the scene, posed in the wearer's device frame.
struct SceneActor {
  Pose3D pose{PoseFrame::kDevice};
  const CharacterProfile* profile = nullptr;
};

struct RenderOptions {
  std::uint64_t background_seed = 0;
  /// When set, the record gets world-from-camera poses and world joints.
  std::optional<Eigen::Isometry3d> world_from_device;
};

struct RenderedFrame {
  RgbImage left;
  RgbImage right;
  FrameRecord record;
};

/// Ray-traces bone capsules (and head spheres of other actors) into both
/// fisheye views over a seeded noise background. The wearer's own head is not
/// drawn since the cameras sit in front of it. Pixels outside the image circle
/// stay black.
RenderedFrame render_frame(const Pose3D& device_pose, const StereoRig& rig,
                           const CharacterProfile& profile, const RenderOptions& options = {},
                           std::span<const SceneActor> others = {});

/// Seeded noise inside the image circle, black outside.
RgbImage noise_background(const FisheyeIntrinsics& intr, std::uint64_t seed);

/// The background render_frame draws behind the bodies of one view.
RgbImage render_background(const StereoRig& rig, View view, std::uint64_t background_seed);

/// Unit ray through a pixel position; nullopt outside the field of view.
std::optional<Eigen::Vector3d> unproject(double u, double v, const FisheyeIntrinsics& intr);

}  // namespace uego
