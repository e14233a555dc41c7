// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace uego {

inline constexpr std::size_t kCategoryCount = 30;

/// The thirty motion types, in their canonical table order.
const std::array<std::string_view, kCategoryCount>& motion_categories();

/// Throws ArgumentError for names outside the list.
int category_index(std::string_view name);

/// Comma-separated list -> validated names; empty input means all categories.
std::vector<std::string> parse_category_list(std::string_view csv);

}  // namespace uego
