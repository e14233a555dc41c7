// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "uego/core/error.hpp"
#include "uego/core/frame_record.hpp"
#include "uego/core/image.hpp"

namespace uego {

AxisStats axis_stats(std::span<const Eigen::Vector3d> points) {
  AxisStats s;
  if (points.empty()) return s;
  for (const auto& p : points) s.mean += p;
  s.mean /= static_cast<double>(points.size());
  for (const auto& p : points) s.variance += (p - s.mean).cwiseAbs2();
  s.variance /= static_cast<double>(points.size());
  return s;
}

DistributionReport compute_distribution(const std::filesystem::path& root,
                                        std::span<const Split> splits) {
  DistributionReport r;
  for (Split split : splits) {
    const auto path = manifest_path(root, split);
    if (!std::filesystem::exists(path)) continue;
    const DatasetManifest m = load_manifest(path, root, false);
    for (const auto& clip : m.clips) {
      for (const auto& rel : clip.frames) {
        const FrameRecord rec = load_frame_record(root / rel);
        const Eigen::Vector3d pelvis = rec.joints_world.pelvis();
        r.head.push_back(rec.joints_world.joint(Joint::kHead) - pelvis);
        r.left_foot.push_back(rec.joints_world.joint(Joint::kFootL) - pelvis);
      }
    }
  }
  if (r.head.empty()) throw DataError("no frames found under " + root.string());
  r.head_stats = axis_stats(r.head);
  r.left_foot_stats = axis_stats(r.left_foot);
  return r;
}

nlohmann::json to_json_value(const DistributionReport& r) {
  auto stats = [](const AxisStats& s) {
    return nlohmann::json{{"mean", {s.mean.x(), s.mean.y(), s.mean.z()}},
                          {"variance", {s.variance.x(), s.variance.y(), s.variance.z()}}};
  };
  return {{"frames", r.frame_count()},
          {"head", stats(r.head_stats)},
          {"left_foot", stats(r.left_foot_stats)}};
}

std::string format_distribution_table(const DistributionReport& r) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "pelvis-relative joint positions over %d frames (cm)\n",
                r.frame_count());
  out += line;
  std::snprintf(line, sizeof(line), "%-10s %-4s %10s %12s\n", "joint", "axis", "mean", "variance");
  out += line;
  const char* axes[3] = {"x", "y", "z"};
  auto rows = [&](const char* name, const AxisStats& s) {
    for (int a = 0; a < 3; ++a) {
      std::snprintf(line, sizeof(line), "%-10s %-4s %10.2f %12.2f\n", name, axes[a], s.mean[a],
                    s.variance[a]);
      out += line;
    }
  };
  rows("head", r.head_stats);
  rows("left_foot", r.left_foot_stats);
  return out;
}

void write_scatter_png(std::span<const Eigen::Vector3d> points, const std::filesystem::path& path,
                       int panel_size) {
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  const int gap = 8;
  RgbImage img(3 * panel_size + 4 * gap, panel_size + 2 * gap);
  std::fill(img.pixels.begin(), img.pixels.end(), 255);
  double extent = 1.0;
  for (const auto& p : points) extent = std::max(extent, p.cwiseAbs().maxCoeff());
  extent *= 1.05;
  for (int panel = 0; panel < 3; ++panel) {
    const int x0 = gap + panel * (panel_size + gap);
    const int y0 = gap;
    auto to_px = [&](double value) {
      return static_cast<int>(std::lround((value / extent * 0.5 + 0.5) * (panel_size - 1)));
    };
    for (int i = 0; i < panel_size; ++i) {
      for (int c = 0; c < 3; ++c) {
        img.at(x0 + i, y0 + panel_size / 2)[c] = 190;
        img.at(x0 + panel_size / 2, y0 + i)[c] = 190;
        img.at(x0 + i, y0)[c] = img.at(x0 + i, y0 + panel_size - 1)[c] = 0;
        img.at(x0, y0 + i)[c] = img.at(x0 + panel_size - 1, y0 + i)[c] = 0;
      }
    }
    for (const auto& p : points) {
      const int px = to_px(p[pairs[panel][0]]);
      // Image rows grow downwards, so flip the vertical axis.
      const int py = panel_size - 1 - to_px(p[pairs[panel][1]]);
      std::uint8_t* c = img.at(x0 + px, y0 + py);
      c[0] = 200;
      c[1] = 30;
      c[2] = 30;
    }
  }
  write_png(img, path);
}

}  // namespace uego
