// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/camera/heatmaps.hpp"

#include <cmath>

#include "uego/core/error.hpp"

namespace uego {

HeatmapStack render_heatmaps(const Keypoints2D& keypoints, int image_size, int heatmap_size,
                             double sigma) {
  if (image_size <= 0) throw ArgumentError("image size must be positive");
  if (!(sigma > 0.0)) throw ArgumentError("sigma must be positive");
  HeatmapStack out(heatmap_size);
  const double scale = static_cast<double>(heatmap_size) / image_size;
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  for (int c = 0; c < HeatmapStack::channels(); ++c) {
    const Keypoint& kp = keypoints.points[c];
    if (!kp.visible) continue;
    const double hx = kp.u * scale;
    const double hy = kp.v * scale;
    for (int y = 0; y < heatmap_size; ++y) {
      const double dy = y + 0.5 - hy;
      for (int x = 0; x < heatmap_size; ++x) {
        const double dx = x + 0.5 - hx;
        out.at(c, y, x) = static_cast<float>(std::exp(-(dx * dx + dy * dy) * inv_two_var));
      }
    }
  }
  return out;
}

Keypoints2D decode_heatmaps(const HeatmapStack& heatmaps, int image_size, float threshold) {
  const int n = heatmaps.size();
  const double cell = static_cast<double>(image_size) / n;
  Keypoints2D out;
  for (int c = 0; c < HeatmapStack::channels(); ++c) {
    const auto ch = heatmaps.channel(c);
    std::size_t best = 0;
    for (std::size_t i = 1; i < ch.size(); ++i) {
      if (ch[i] > ch[best]) best = i;
    }
    const int x = static_cast<int>(best % n);
    const int y = static_cast<int>(best / n);
    out.points[c] = Keypoint{(x + 0.5) * cell, (y + 0.5) * cell, ch[best] > threshold};
  }
  return out;
}

}  // namespace uego
