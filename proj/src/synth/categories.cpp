// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/categories.hpp"

#include <algorithm>

#include "uego/core/error.hpp"

namespace uego {

const std::array<std::string_view, kCategoryCount>& motion_categories() {
  static constexpr std::array<std::string_view, kCategoryCount> kNames = {
      "jumping",
      "falling down",
      "exercising",
      "pulling",
      "singing",
      "rolling",
      "crawling",
      "laying",
      "sitting on the ground",
      "crouching - normal",
      "crouching - turning",
      "crouching - to standing",
      "crouching - forward",
      "crouching - backward",
      "crouching - sideways",
      "standing - whole body",
      "standing - upper body",
      "standing - turning",
      "standing - to crouching",
      "standing - forward",
      "standing - backward",
      "standing - sideways",
      "dancing",
      "boxing",
      "wrestling",
      "soccer",
      "baseball",
      "basketball",
      "american football",
      "golf",
  };
  return kNames;
}

int category_index(std::string_view name) {
  const auto& names = motion_categories();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ArgumentError("unknown motion category '" + std::string(name) + "'");
  return static_cast<int>(it - names.begin());
}

std::vector<std::string> parse_category_list(std::string_view csv) {
  std::vector<std::string> out;
  if (csv.empty()) {
    for (auto n : motion_categories()) out.emplace_back(n);
    return out;
  }
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    std::string item(csv.substr(start, end - start));
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    item = first == std::string::npos ? "" : item.substr(first, last - first + 1);
    if (!item.empty()) {
      category_index(item);
      if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    start = end + 1;
  }
  if (out.empty()) throw ArgumentError("category list is empty");
  return out;
}

}  // namespace uego
