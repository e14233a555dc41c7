// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "uego/synth/character.hpp"
#include "uego/synth/kinematics.hpp"

namespace uego {

inline constexpr int kMotionFps = 25;

enum class Dof { kPitch = 0, kRoll = 1, kYaw = 2 };

struct Sinusoid {
  double amplitude = 0.0;  // radians (or cm for vertical bounce)
  double frequency_hz = 0.0;
  double phase = 0.0;

  double at(double t) const;
};

/// One rotational degree of freedom: an eased transition from `start` to
/// `end` over the clip plus sinusoids, clamped to [lower, upper].
struct AngleTrack {
  int joint = 0;
  Dof axis = Dof::kPitch;
  double start = 0.0;
  double end = 0.0;
  std::vector<Sinusoid> waves;
  double lower = 0.0;
  double upper = 0.0;

  double at(double t, double progress) const;
};

struct RootTrack {
  Eigen::Vector2d start_xy = Eigen::Vector2d::Zero();
  double ground_z = 0.0;
  double start_yaw = 0.0;
  /// Heading change from first to last frame.
  double total_yaw = 0.0;
  /// (right, forward) in the heading frame, cm/s.
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double lean_start = 0.0;
  double lean_end = 0.0;
  double side_start = 0.0;
  double side_end = 0.0;
  /// Rotation about the body's long axis, for rolling.
  double spin_start = 0.0;
  double spin_end = 0.0;
  std::vector<Sinusoid> yaw_waves;
  std::vector<Sinusoid> lean_waves;
  std::vector<Sinusoid> side_waves;
  double jump_height = 0.0;
  double jump_period = 1.0;
};

struct MotionClip {
  std::string category;
  int fps = kMotionFps;
  double duration = 0.0;
  int frame_count = 0;
  std::vector<AngleTrack> tracks;
  RootTrack root;

  double time_of(int frame) const { return static_cast<double>(frame) / fps; }
  /// 0 at the first frame, 1 at the last.
  double progress_of(int frame) const;
};

struct MotionOptions {
  /// Scales every oscillation, transition, translation and turn; 0 freezes the clip.
  double amplitude_scale = 1.0;
  Eigen::Vector2d start_xy = Eigen::Vector2d::Zero();
  double ground_z = 0.0;
};

/// Category template with randomised parameters. Throws ArgumentError for an
/// unknown category or a non-positive duration.
MotionClip generate_motion(std::string_view category, double duration,
                           const CharacterProfile& profile, std::mt19937_64& rng,
                           const MotionOptions& options = {});

struct RootState {
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
  double yaw = 0.0;
  double lean = 0.0;
  double side = 0.0;
  double spin = 0.0;
  double jump = 0.0;

  Eigen::Matrix3d rotation() const;
};

JointRotations joint_rotations_at(const MotionClip& clip, int frame);
RootState root_state_at(const MotionClip& clip, int frame);

/// Posed body for one frame, dropped so its lowest vertex touches the clip's
/// ground height (plus any jump offset). Throws std::out_of_range for a bad index.
BodyState pose_frame(const MotionClip& clip, int frame, const CharacterProfile& profile);

/// World-frame joints of one frame.
Pose3D fk_pose(const MotionClip& clip, int frame, const CharacterProfile& profile);

}  // namespace uego
