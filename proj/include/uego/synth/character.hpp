// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <random>

#include <Eigen/Core>

#include "uego/core/skeleton.hpp"

namespace uego {

using Rgb = std::array<std::uint8_t, 3>;

/// Parametric stand-in for a scanned human model. Everything is indexed by
/// joint id; entries for the root (neck) are unused except `radius`.
struct CharacterProfile {
  int id = 0;
  /// Length of the bone ending at each joint, cm.
  std::array<double, kJointCount> bone_length{};
  /// Capsule radius of the bone ending at each joint, cm. The head entry is
  /// the radius of the head sphere.
  std::array<double, kJointCount> radius{};
  std::array<Rgb, kJointCount> color{};
  std::uint64_t appearance_seed = 0;

  /// Floor to top of head in the rest pose, cm.
  double standing_height() const;
  /// Height of the lowest surface point relative to the neck in the rest pose.
  double lowest_vertex_z() const;
};

inline constexpr double kMinStature = 140.0;
inline constexpr double kMaxStature = 200.0;

/// Unit direction of the bone ending at `joint`, in the body frame
/// (x right, y forward, z up) of the zero-angle rest pose.
Eigen::Vector3d rest_direction(int joint);

/// Reference adult, about 170 cm tall.
CharacterProfile reference_character();
/// Randomised proportions and colors; stature stays within [kMinStature, kMaxStature].
CharacterProfile make_character(int id, std::mt19937_64& rng);

}  // namespace uego
