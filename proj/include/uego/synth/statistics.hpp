// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "uego/core/manifest.hpp"

namespace uego {

struct AxisStats {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  /// Population variance per axis.
  Eigen::Vector3d variance = Eigen::Vector3d::Zero();
};

AxisStats axis_stats(std::span<const Eigen::Vector3d> points);

/// Head and left-foot positions relative to the pelvis, in world axes (z up).
struct DistributionReport {
  std::vector<Eigen::Vector3d> head;
  std::vector<Eigen::Vector3d> left_foot;
  AxisStats head_stats;
  AxisStats left_foot_stats;

  int frame_count() const { return static_cast<int>(head.size()); }
};

/// Reads every frame listed in the given splits. Throws DataError when no
/// frames are found.
DistributionReport compute_distribution(const std::filesystem::path& root,
                                        std::span<const Split> splits);

nlohmann::json to_json_value(const DistributionReport& report);
std::string format_distribution_table(const DistributionReport& report);

/// Three orthographic panels (x-y, x-z, y-z) of a point cloud, in cm.
void write_scatter_png(std::span<const Eigen::Vector3d> points, const std::filesystem::path& path,
                       int panel_size = 240);

}  // namespace uego
