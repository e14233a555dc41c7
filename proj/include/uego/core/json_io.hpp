// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

namespace uego {

/// Pretty-printed, trailing newline. Throws DataError when the file cannot be written.
void write_json_file(const nlohmann::json& value, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

void write_text_file(const std::string& text, const std::filesystem::path& path);

/// Hash of the compact dump; object keys are sorted so equal values hash equally.
std::string json_hash(const nlohmann::json& value);

}  // namespace uego
