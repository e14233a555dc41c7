// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/core/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uego/core/error.hpp"
#include "uego/core/frame_record.hpp"
#include "uego/core/json_io.hpp"

namespace uego {

using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ArgumentError("unknown split '" + std::string(name) + "'");
}

int DatasetManifest::frame_count() const {
  int n = 0;
  for (const auto& c : clips) n += c.frame_count;
  return n;
}

json to_json_value(const DatasetManifest& m) {
  json clips = json::array();
  for (const auto& c : m.clips) {
    clips.push_back({{"motion_id", c.motion_id},
                     {"category", c.category},
                     {"character_id", c.character_id},
                     {"frame_count", c.frame_count},
                     {"frames", c.frames}});
  }
  // Seeds are stored as strings: JSON readers commonly truncate 64-bit integers.
  return {{"split", std::string(to_string(m.split))},
          {"seed", std::to_string(m.seed)},
          {"config_hash", m.config_hash},
          {"topology_checksum", std::to_string(m.topology_checksum)},
          {"clips", std::move(clips)}};
}

DatasetManifest manifest_from_json(const json& j) {
  try {
    DatasetManifest m;
    m.split = parse_split(j.at("split").get<std::string>());
    m.seed = std::stoull(j.at("seed").get<std::string>());
    m.config_hash = j.at("config_hash").get<std::string>();
    m.topology_checksum = std::stoull(j.at("topology_checksum").get<std::string>());
    for (const auto& c : j.at("clips")) {
      ClipEntry e;
      e.motion_id = c.at("motion_id").get<std::string>();
      e.category = c.at("category").get<std::string>();
      e.character_id = c.at("character_id").get<int>();
      e.frame_count = c.at("frame_count").get<int>();
      e.frames = c.at("frames").get<std::vector<std::string>>();
      if (static_cast<int>(e.frames.size()) != e.frame_count) {
        throw DataError("clip " + e.motion_id + " lists " + std::to_string(e.frames.size()) +
                        " frames but declares " + std::to_string(e.frame_count));
      }
      m.clips.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
}

std::filesystem::path manifest_path(const std::filesystem::path& root, Split split) {
  return root / ("manifest." + std::string(to_string(split)));
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  write_json_file(to_json_value(manifest), path);
}

DatasetManifest load_manifest(const std::filesystem::path& path, const std::filesystem::path& root,
                              bool verify_files) {
  if (!std::filesystem::exists(path)) throw DataError("manifest not found: " + path.string());
  DatasetManifest m = manifest_from_json(read_json_file(path));
  if (verify_files) {
    for (const auto& clip : m.clips) {
      for (const auto& rel : clip.frames) {
        const auto meta = root / rel;
        if (!std::filesystem::exists(meta)) throw DataError("missing frame file: " + meta.string());
        const FrameRecord r = load_frame_record(meta);
        for (const auto& img : {r.left_image, r.right_image}) {
          if (!std::filesystem::exists(root / img)) {
            throw DataError("missing image file: " + (root / img).string());
          }
        }
      }
    }
  }
  return m;
}

const std::vector<int>& SplitAssignment::of(Split s) const {
  switch (s) {
    case Split::kTrain: return train;
    case Split::kVal: return val;
    case Split::kTest: return test;
  }
  return train;
}

SplitAssignment split_motions(int motion_count, const std::array<double, 3>& ratios,
                              std::mt19937_64& rng) {
  if (motion_count < 0) throw ArgumentError("motion count must be non-negative");
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0) throw ArgumentError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("split ratios must sum to 1");

  std::array<int, 3> counts{};
  std::array<double, 3> frac{};
  int assigned = 0;
  for (int s = 0; s < 3; ++s) {
    const double exact = ratios[s] * motion_count;
    // Tolerate representation error such as 0.1 * 100 = 10.000000000000002.
    counts[s] = static_cast<int>(std::floor(exact + 1e-9));
    frac[s] = exact - counts[s];
    assigned += counts[s];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; assigned < motion_count; k = (k + 1) % 3, ++assigned) ++counts[order[k]];

  std::vector<int> ids(static_cast<std::size_t>(motion_count));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);

  SplitAssignment out;
  auto it = ids.begin();
  out.train.assign(it, it + counts[0]);
  it += counts[0];
  out.val.assign(it, it + counts[1]);
  it += counts[1];
  out.test.assign(it, ids.end());
  for (auto* v : {&out.train, &out.val, &out.test}) std::sort(v->begin(), v->end());
  return out;
}

}  // namespace uego
