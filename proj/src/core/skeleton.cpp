// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/skeleton.hpp"

#include <algorithm>
#include <vector>

#include "uego/core/hashing.hpp"

namespace uego {
namespace {

SkeletonTopology make_topology() {
  SkeletonTopology t;
  t.joint_names = {"head",       "neck_01", "upperarm_l", "lowerarm_l", "hand_l",     "thigh_l",
                   "calf_l",     "foot_l",  "ball_l",     "upperarm_r", "lowerarm_r", "hand_r",
                   "thigh_r",    "calf_r",  "foot_r",     "ball_r"};
  const int neck = index_of(Joint::kNeck);
  t.parent_index = {neck, -1,
                    neck, index_of(Joint::kUpperArmL), index_of(Joint::kLowerArmL),
                    neck, index_of(Joint::kThighL),    index_of(Joint::kCalfL), index_of(Joint::kFootL),
                    neck, index_of(Joint::kUpperArmR), index_of(Joint::kLowerArmR),
                    neck, index_of(Joint::kThighR),    index_of(Joint::kCalfR), index_of(Joint::kFootR)};
  std::size_t h = 0;
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    if (j != index_of(Joint::kHead)) t.heatmap_subset[h++] = j;
  }
  std::size_t b = 0;
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    if (t.parent_index[j] >= 0) t.bones[b++] = Bone{t.parent_index[j], j};
  }
  return t;
}

}  // namespace

int SkeletonTopology::root() const {
  for (std::size_t j = 0; j < kJointCount; ++j) {
    if (parent_index[j] < 0) return static_cast<int>(j);
  }
  return -1;
}

int SkeletonTopology::heatmap_channel(int joint) const {
  for (std::size_t c = 0; c < kHeatmapJointCount; ++c) {
    if (heatmap_subset[c] == joint) return static_cast<int>(c);
  }
  return -1;
}

std::uint64_t SkeletonTopology::checksum() const {
  std::uint64_t h = kFnvOffset;
  for (auto name : joint_names) {
    h = fnv1a64(name, h);
    h = fnv1a64(std::string_view("\n"), h);
  }
  return h;
}

const SkeletonTopology& build_topology() {
  static const SkeletonTopology topology = make_topology();
  return topology;
}

bool is_valid_tree(const SkeletonTopology& t) {
  int roots = 0;
  for (int p : t.parent_index) {
    if (p < 0) ++roots;
    else if (p >= static_cast<int>(kJointCount)) return false;
  }
  if (roots != 1) return false;
  // Every joint must reach the root without revisiting a node.
  for (std::size_t j = 0; j < kJointCount; ++j) {
    int cur = static_cast<int>(j);
    std::size_t steps = 0;
    while (t.parent_index[cur] >= 0) {
      cur = t.parent_index[cur];
      if (++steps > kJointCount) return false;
    }
  }
  std::vector<int> child_count(kJointCount, 0);
  for (const Bone& b : t.bones) {
    if (b.child < 0 || b.child >= static_cast<int>(kJointCount)) return false;
    if (t.parent_index[b.child] != b.parent) return false;
    ++child_count[b.child];
  }
  for (std::size_t j = 0; j < kJointCount; ++j) {
    const int expected = t.parent_index[j] >= 0 ? 1 : 0;
    if (child_count[j] != expected) return false;
  }
  return true;
}

int joint_from_name(std::string_view name) {
  const auto& names = build_topology().joint_names;
  const auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace uego
