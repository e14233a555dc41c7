// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/spawn/spawner.hpp"

#include <algorithm>

#include "uego/core/error.hpp"
#include "uego/core/json_io.hpp"

namespace uego {

bool SpawnRegion::contains(const Eigen::Vector2d& xy) const {
  const Eigen::Vector2d d = (xy - center.head<2>()).cwiseAbs();
  return d.x() <= half_extents.x() && d.y() <= half_extents.y();
}

void SpawnConfig::validate() const {
  if (!(min_separation < neighbor_radius)) {
    throw ArgumentError("min_separation must be smaller than neighbor_radius");
  }
  if (!(group_size_mean >= 1.0)) throw ArgumentError("group_size_mean must be at least 1");
  if (min_separation < 0.0) throw ArgumentError("min_separation must be non-negative");
}

int pick_region(std::span<const SpawnRegion> regions, std::mt19937_64& rng) {
  if (regions.empty()) throw ArgumentError("pick_region needs at least one region");
  std::vector<double> areas;
  areas.reserve(regions.size());
  for (const auto& r : regions) {
    if (!(r.half_extents.x() > 0.0 && r.half_extents.y() > 0.0)) {
      throw ArgumentError("region half extents must be positive");
    }
    areas.push_back(r.area());
  }
  std::discrete_distribution<int> dist(areas.begin(), areas.end());
  return dist(rng);
}

std::vector<int> select_neighbors(std::span<const SpawnRegion> regions, int i, double radius) {
  if (i < 0 || i >= static_cast<int>(regions.size())) throw ArgumentError("region index out of range");
  std::vector<int> out;
  for (int t = 0; t < static_cast<int>(regions.size()); ++t) {
    if ((regions[t].center - regions[i].center).norm() <= radius) out.push_back(t);
  }
  return out;
}

SampleResult sample_positions(std::span<const SpawnRegion> selected, int n, double min_sep,
                              std::mt19937_64& rng, int attempt_budget) {
  if (selected.empty()) throw ArgumentError("sample_positions needs at least one region");
  if (n < 1) throw ArgumentError("sample_positions needs n >= 1");
  std::vector<double> areas;
  for (const auto& r : selected) areas.push_back(r.area());
  std::discrete_distribution<int> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> accept(0.0, 1.0);
  const double min_sep_sq = min_sep * min_sep;

  SampleResult out;
  while (static_cast<int>(out.positions.size()) < n && out.attempts < attempt_budget) {
    ++out.attempts;
    const SpawnRegion& r = selected[pick(rng)];
    const Eigen::Vector2d xy(r.center.x() + unit(rng) * r.half_extents.x(),
                             r.center.y() + unit(rng) * r.half_extents.y());
    // A point covered by c rectangles is proposed c times as often; thin it
    // back to uniform over the union.
    int cover = 0;
    for (const auto& other : selected) cover += other.contains(xy) ? 1 : 0;
    if (cover > 1 && accept(rng) * cover >= 1.0) continue;
    bool far_enough = true;
    for (const auto& p : out.positions) {
      if ((p.head<2>() - xy).squaredNorm() < min_sep_sq) {
        far_enough = false;
        break;
      }
    }
    if (far_enough) out.positions.emplace_back(xy.x(), xy.y(), r.ground_height());
  }
  out.saturated = static_cast<int>(out.positions.size()) < n;
  return out;
}

int draw_group_size(double mean, std::mt19937_64& rng) {
  std::poisson_distribution<int> dist(mean);
  return std::max(1, dist(rng));
}

SpawnResult place_characters(std::span<const SpawnRegion> regions, const SpawnConfig& config,
                             std::span<const double> lowest_vertex_z, std::mt19937_64& rng) {
  if (regions.empty()) throw ArgumentError("place_characters needs at least one region");
  if (lowest_vertex_z.empty()) throw ArgumentError("place_characters needs at least one character");
  config.validate();

  SpawnResult out;
  out.region = pick_region(regions, rng);
  out.neighbors = select_neighbors(regions, out.region, config.neighbor_radius);
  std::vector<SpawnRegion> selected;
  for (int t : out.neighbors) selected.push_back(regions[t]);
  out.requested = draw_group_size(config.group_size_mean, rng);

  const SampleResult sample = sample_positions(selected, out.requested, config.min_separation, rng);
  std::uniform_int_distribution<int> which(0, static_cast<int>(lowest_vertex_z.size()) - 1);
  for (const auto& p : sample.positions) {
    Placement placement;
    placement.position = p;
    placement.character = which(rng);
    placement.z_offset = p.z() - lowest_vertex_z[placement.character];
    out.placements.push_back(placement);
  }
  out.saturated = sample.saturated;
  if (out.saturated) {
    out.warning = "placed " + std::to_string(sample.positions.size()) + " of " +
                  std::to_string(out.requested) + " characters before the attempt budget ran out";
  }
  return out;
}

std::vector<SpawnRegion> regions_from_json(const nlohmann::json& j) {
  std::vector<SpawnRegion> out;
  try {
    for (const auto& r : j.at("regions")) {
      SpawnRegion region;
      const auto c = r.at("center").get<std::vector<double>>();
      const auto h = r.at("half_extents").get<std::vector<double>>();
      if (c.size() != 3 || h.size() != 2) throw DataError("region needs a 3D center and 2D half extents");
      region.center = Eigen::Vector3d(c[0], c[1], c[2]);
      region.half_extents = Eigen::Vector2d(h[0], h[1]);
      if (!(h[0] > 0.0 && h[1] > 0.0)) throw DataError("region half extents must be positive");
      out.push_back(region);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scene: ") + e.what());
  }
  return out;
}

nlohmann::json regions_to_json(std::span<const SpawnRegion> regions) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : regions) {
    list.push_back({{"center", {r.center.x(), r.center.y(), r.center.z()}},
                    {"half_extents", {r.half_extents.x(), r.half_extents.y()}}});
  }
  return {{"regions", std::move(list)}};
}

std::vector<SpawnRegion> load_scene(const std::filesystem::path& path) {
  return regions_from_json(read_json_file(path));
}

std::vector<SpawnRegion> default_scene() {
  // A plaza, a raised terrace next to it and a distant street.
  return {
      SpawnRegion{Eigen::Vector3d(0.0, 0.0, 0.0), Eigen::Vector2d(600.0, 400.0)},
      SpawnRegion{Eigen::Vector3d(700.0, 300.0, 40.0), Eigen::Vector2d(200.0, 200.0)},
      SpawnRegion{Eigen::Vector3d(-300.0, 650.0, 0.0), Eigen::Vector2d(300.0, 150.0)},
      SpawnRegion{Eigen::Vector3d(2500.0, -1800.0, -20.0), Eigen::Vector2d(800.0, 250.0)},
  };
}

nlohmann::json to_json_value(const SpawnConfig& c) {
  return {{"neighbor_radius", c.neighbor_radius},
          {"min_separation", c.min_separation},
          {"group_size_mean", c.group_size_mean},
          {"seed", c.seed}};
}

SpawnConfig spawn_config_from_json(const nlohmann::json& j) {
  SpawnConfig c;
  c.neighbor_radius = j.value("neighbor_radius", c.neighbor_radius);
  c.min_separation = j.value("min_separation", c.min_separation);
  c.group_size_mean = j.value("group_size_mean", c.group_size_mean);
  c.seed = j.value("seed", c.seed);
  return c;
}

}  // namespace uego
