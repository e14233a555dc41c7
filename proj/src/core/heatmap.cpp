// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/heatmap.hpp"

#include <string>

#include "uego/core/error.hpp"

namespace uego {

HeatmapStack::HeatmapStack(int size)
    : size_(size), data_(static_cast<std::size_t>(channels()) * size * size, 0.0f) {
  if (size <= 0) throw ArgumentError("heatmap size must be positive");
}

HeatmapStack::HeatmapStack(int size, std::vector<float> data) : size_(size), data_(std::move(data)) {
  if (size <= 0) throw ArgumentError("heatmap size must be positive");
  if (data_.size() != static_cast<std::size_t>(channels()) * size * size) {
    throw ArgumentError("heatmap data has " + std::to_string(data_.size()) +
                        " values, expected 15 x " + std::to_string(size) + " x " +
                        std::to_string(size));
  }
}

std::span<float> HeatmapStack::channel(int c) {
  return std::span<float>(data_).subspan(index(c, 0, 0), static_cast<std::size_t>(size_) * size_);
}

std::span<const float> HeatmapStack::channel(int c) const {
  return std::span<const float>(data_).subspan(index(c, 0, 0),
                                               static_cast<std::size_t>(size_) * size_);
}

}  // namespace uego
