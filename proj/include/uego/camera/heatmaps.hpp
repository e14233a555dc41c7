// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "uego/core/heatmap.hpp"
#include "uego/core/pose.hpp"

namespace uego {

inline constexpr float kDecodeThreshold = 0.1f;

/// Ground-truth heatmaps: each visible keypoint becomes an unnormalized
/// Gaussian exp(-d^2 / (2 sigma^2)) evaluated at cell centers of the
/// heatmap grid; invisible channels stay zero.
HeatmapStack render_heatmaps(const Keypoints2D& keypoints, int image_size, int heatmap_size = 64,
                             double sigma = 2.0);

/// Per-channel argmax (lowest linear index wins ties), reported at the cell
/// center in input-image pixels. Visible when the peak exceeds `threshold`.
Keypoints2D decode_heatmaps(const HeatmapStack& heatmaps, int image_size,
                            float threshold = kDecodeThreshold);

}  // namespace uego
