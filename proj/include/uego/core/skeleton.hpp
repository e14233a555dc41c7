// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace uego {

inline constexpr std::size_t kJointCount = 16;
inline constexpr std::size_t kHeatmapJointCount = 15;
inline constexpr std::size_t kBoneCount = 15;

// Ordering: head and neck, then each side (left before right) from proximal
// to distal, arms before legs. Tensor layouts everywhere depend on it.
enum class Joint : std::uint8_t {
  kHead = 0,
  kNeck,
  kUpperArmL,
  kLowerArmL,
  kHandL,
  kThighL,
  kCalfL,
  kFootL,
  kBallL,
  kUpperArmR,
  kLowerArmR,
  kHandR,
  kThighR,
  kCalfR,
  kFootR,
  kBallR,
};

constexpr int index_of(Joint j) { return static_cast<int>(j); }

struct Bone {
  int parent = -1;
  int child = -1;
};

struct SkeletonTopology {
  std::array<std::string_view, kJointCount> joint_names{};
  /// -1 marks the root (the neck).
  std::array<int, kJointCount> parent_index{};
  /// Joints that carry a heatmap channel; the head is predicted from context only.
  std::array<int, kHeatmapJointCount> heatmap_subset{};
  std::array<Bone, kBoneCount> bones{};

  int root() const;
  /// Position of `joint` inside heatmap_subset, or -1 for the head.
  int heatmap_channel(int joint) const;
  /// FNV-1a over the ordered joint names; every module checks this against its own copy.
  std::uint64_t checksum() const;
};

const SkeletonTopology& build_topology();

/// True when parent_index forms one tree with a single root and the bone list
/// contains every non-root joint exactly once as a child.
bool is_valid_tree(const SkeletonTopology& topology);

/// Joint id from its name, or -1.
int joint_from_name(std::string_view name);

}  // namespace uego
