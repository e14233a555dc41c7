// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace uego {

/// Axis-aligned ground rectangle in the world frame (z up), centimeters.
struct SpawnRegion {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector2d half_extents = Eigen::Vector2d::Ones();

  double area() const { return 4.0 * half_extents.x() * half_extents.y(); }
  double ground_height() const { return center.z(); }
  /// Horizontal containment, boundary inclusive.
  bool contains(const Eigen::Vector2d& xy) const;
};

struct SpawnConfig {
  double neighbor_radius = 1000.0;
  double min_separation = 100.0;
  double group_size_mean = 5.0;
  std::uint64_t seed = 0;

  /// Throws ArgumentError when min_separation >= neighbor_radius or the mean is below 1.
  void validate() const;
};

inline constexpr int kSpawnAttemptBudget = 10000;

/// Area-weighted choice, P(i) = S_i / sum_k S_k.
int pick_region(std::span<const SpawnRegion> regions, std::mt19937_64& rng);

/// Every t (including i) with |C_t - C_i| <= radius; the boundary is inclusive.
std::vector<int> select_neighbors(std::span<const SpawnRegion> regions, int i, double radius);

struct SampleResult {
  /// World positions on the ground of the rectangle they were drawn from.
  std::vector<Eigen::Vector3d> positions;
  int attempts = 0;
  /// True when the attempt budget ran out before `n` positions were found.
  bool saturated = false;
};

/// Rejection sampling, uniform over the union of `selected` (overlaps are not
/// double counted) with pairwise horizontal separation >= min_sep.
SampleResult sample_positions(std::span<const SpawnRegion> selected, int n, double min_sep,
                              std::mt19937_64& rng, int attempt_budget = kSpawnAttemptBudget);

struct Placement {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int character = 0;
  /// Vertical offset that puts the character's lowest vertex on the ground.
  double z_offset = 0.0;
};

struct SpawnResult {
  int region = 0;
  std::vector<int> neighbors;
  int requested = 0;
  std::vector<Placement> placements;
  bool saturated = false;
  std::string warning;
};

/// Group size ~ Poisson(group_size_mean), clamped to >= 1.
int draw_group_size(double mean, std::mt19937_64& rng);

/// One round of the placement procedure. `lowest_vertex_z` holds, per
/// character, the height of its lowest vertex in its own local frame.
SpawnResult place_characters(std::span<const SpawnRegion> regions, const SpawnConfig& config,
                             std::span<const double> lowest_vertex_z, std::mt19937_64& rng);

/// Scene file: {"regions": [{"center": [x, y, z], "half_extents": [hx, hy]}, ...]}.
std::vector<SpawnRegion> regions_from_json(const nlohmann::json& j);
nlohmann::json regions_to_json(std::span<const SpawnRegion> regions);
std::vector<SpawnRegion> load_scene(const std::filesystem::path& path);
/// A small built-in scene used when no scene file is given.
std::vector<SpawnRegion> default_scene();

nlohmann::json to_json_value(const SpawnConfig& config);
SpawnConfig spawn_config_from_json(const nlohmann::json& j);

}  // namespace uego
