// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/character.hpp"

#include <algorithm>
#include <cmath>

namespace uego {
namespace {

constexpr std::array<double, kJointCount> kRefLength = {
    12.0,                                 // head
    0.0,                                  // neck (root)
    17.0, 28.0, 25.0, 52.0, 44.0, 42.0, 15.0,  // left
    17.0, 28.0, 25.0, 52.0, 44.0, 42.0, 15.0,  // right
};

constexpr std::array<double, kJointCount> kRefRadius = {
    10.5, 6.0,
    6.0, 5.0, 4.0, 13.0, 7.5, 5.5, 4.0,
    6.0, 5.0, 4.0, 13.0, 7.5, 5.5, 4.0,
};

constexpr std::array<Rgb, kJointCount> kPalette = {{
    {224, 172, 140}, {200, 160, 130},
    {200, 60, 60}, {230, 120, 40}, {240, 220, 60}, {60, 90, 200},
    {40, 170, 80}, {40, 190, 190}, {150, 70, 200},
    {160, 40, 110}, {250, 150, 150}, {180, 150, 30}, {30, 50, 130},
    {120, 220, 100}, {20, 110, 140}, {220, 120, 230},
}};

bool is_right(int j) { return j >= index_of(Joint::kUpperArmR); }

// Rest-pose joint positions relative to the neck.
std::array<Eigen::Vector3d, kJointCount> rest_positions(const CharacterProfile& c) {
  const auto& topo = build_topology();
  std::array<Eigen::Vector3d, kJointCount> p{};
  p[index_of(Joint::kNeck)] = Eigen::Vector3d::Zero();
  // Parents precede children in this order.
  constexpr std::array<int, kJointCount - 1> kOrder = {0, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  for (int j : kOrder) p[j] = p[topo.parent_index[j]] + c.bone_length[j] * rest_direction(j);
  return p;
}

}  // namespace

Eigen::Vector3d rest_direction(int joint) {
  const double side = is_right(joint) ? 1.0 : -1.0;
  Eigen::Vector3d d = Eigen::Vector3d::Zero();
  switch (static_cast<Joint>(joint)) {
    case Joint::kHead: d = {0.0, 0.1, 1.0}; break;
    case Joint::kNeck: return Eigen::Vector3d::Zero();
    case Joint::kUpperArmL: case Joint::kUpperArmR: d = {side, 0.0, -0.15}; break;
    case Joint::kLowerArmL: case Joint::kLowerArmR: d = {side, 0.0, 0.0}; break;
    case Joint::kHandL: case Joint::kHandR: d = {side, 0.0, 0.0}; break;
    case Joint::kThighL: case Joint::kThighR: d = {0.17 * side, 0.0, -1.0}; break;
    case Joint::kCalfL: case Joint::kCalfR: d = {0.0, 0.0, -1.0}; break;
    case Joint::kFootL: case Joint::kFootR: d = {0.0, 0.0, -1.0}; break;
    case Joint::kBallL: case Joint::kBallR: d = {0.0, 0.85, -0.5}; break;
  }
  return d.normalized();
}

double CharacterProfile::standing_height() const {
  const auto p = rest_positions(*this);
  const int head = index_of(Joint::kHead);
  return p[head].z() + radius[head] - lowest_vertex_z();
}

double CharacterProfile::lowest_vertex_z() const {
  const auto p = rest_positions(*this);
  double lowest = 0.0;
  for (std::size_t j = 0; j < kJointCount; ++j) lowest = std::min(lowest, p[j].z() - radius[j]);
  return lowest;
}

CharacterProfile reference_character() {
  CharacterProfile c;
  c.bone_length = kRefLength;
  c.radius = kRefRadius;
  c.color = kPalette;
  return c;
}

CharacterProfile make_character(int id, std::mt19937_64& rng) {
  CharacterProfile c = reference_character();
  c.id = id;
  c.appearance_seed = rng();
  std::uniform_real_distribution<double> stature(150.0, 190.0);
  std::uniform_real_distribution<double> jitter(0.96, 1.04);
  std::uniform_real_distribution<double> girth(0.85, 1.15);
  std::uniform_int_distribution<int> tint(-15, 15);
  const double scale = stature(rng) / reference_character().standing_height();
  // Left and right share proportions.
  for (int j = 0; j <= index_of(Joint::kBallL); ++j) {
    const double len = jitter(rng);
    const double rad = girth(rng);
    c.bone_length[j] = kRefLength[j] * scale * len;
    c.radius[j] = kRefRadius[j] * scale * rad;
    if (j >= index_of(Joint::kUpperArmL)) {
      const int mirror = j + (index_of(Joint::kUpperArmR) - index_of(Joint::kUpperArmL));
      c.bone_length[mirror] = kRefLength[mirror] * scale * len;
      c.radius[mirror] = kRefRadius[mirror] * scale * rad;
    }
  }
  for (auto& rgb : c.color) {
    for (auto& ch : rgb) ch = static_cast<std::uint8_t>(std::clamp(ch + tint(rng), 0, 255));
  }
  return c;
}

}  // namespace uego
