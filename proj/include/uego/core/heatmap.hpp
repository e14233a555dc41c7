// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uego/core/skeleton.hpp"

namespace uego {

/// Channel-major (15, size, size) stack of non-negative joint heatmaps.
class HeatmapStack {
 public:
  explicit HeatmapStack(int size = 64);
  HeatmapStack(int size, std::vector<float> data);

  int size() const { return size_; }
  static constexpr int channels() { return static_cast<int>(kHeatmapJointCount); }

  float& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  float at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<float> channel(int c);
  std::span<const float> channel(int c) const;
  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool operator==(const HeatmapStack&) const = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * size_ + y) * size_ + x;
  }

  int size_;
  std::vector<float> data_;
};

}  // namespace uego
