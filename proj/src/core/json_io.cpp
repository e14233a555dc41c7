// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/json_io.hpp"

#include <fstream>
#include <sstream>

#include "uego/core/error.hpp"
#include "uego/core/hashing.hpp"

namespace uego {

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

void write_json_file(const nlohmann::json& value, const std::filesystem::path& path) {
  write_text_file(value.dump(2) + "\n", path);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string json_hash(const nlohmann::json& value) {
  // nlohmann::json stores objects in a std::map, so dump() is key-sorted.
  return to_hex(fnv1a64(value.dump()));
}

}  // namespace uego
