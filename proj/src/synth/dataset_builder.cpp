// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/dataset_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "uego/core/error.hpp"
#include "uego/core/frame_record.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/image.hpp"
#include "uego/core/json_io.hpp"
#include "uego/core/skeleton.hpp"
#include "uego/synth/categories.hpp"
#include "uego/synth/character.hpp"
#include "uego/synth/kinematics.hpp"
#include "uego/synth/motion.hpp"
#include "uego/synth/renderer.hpp"

namespace uego {
namespace {

constexpr int kNativeImageSize = 1024;

std::string motion_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "m%05d", index);
  return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0) {
  std::uint64_t h = fnv1a64(stream, seed ^ kFnvOffset);
  h ^= index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct MotionJob {
  int index = 0;
  std::string category;
  Split split = Split::kTrain;
  int character = 0;
  MotionClip clip;
};

}  // namespace

void SynthConfig::validate() const {
  double sum = 0.0;
  for (double r : split_ratios) {
    if (r < 0.0) throw ArgumentError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("split ratios must sum to 1");
  if (!(min_duration_s > 0.0) || max_duration_s < min_duration_s) {
    throw ArgumentError("duration range must be positive and ordered");
  }
  if (character_pool < 1) throw ArgumentError("character pool must be at least 1");
  if (scene.empty()) throw ArgumentError("scene needs at least one spawn region");
  if (amplitude_scale < 0.0) throw ArgumentError("amplitude scale must be non-negative");
  spawn.validate();
  StereoRig check(effective_rig());
}

RigConfig SynthConfig::effective_rig() const {
  RigConfig r = rig;
  if (native_resolution) r.image_size = kNativeImageSize;
  return r;
}

nlohmann::json to_json_value(const SynthConfig& c) {
  return {{"rig", to_json_value(c.rig)},
          {"spawn", to_json_value(c.spawn)},
          {"scene", regions_to_json(c.scene)},
          {"character_pool", c.character_pool},
          {"min_duration_s", c.min_duration_s},
          {"max_duration_s", c.max_duration_s},
          {"split_ratios", c.split_ratios},
          {"amplitude_scale", c.amplitude_scale},
          {"native_resolution", c.native_resolution},
          {"render_crowd", c.render_crowd}};
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    if (j.contains("rig")) c.rig = rig_config_from_json(j.at("rig"));
    if (j.contains("spawn")) c.spawn = spawn_config_from_json(j.at("spawn"));
    if (j.contains("scene")) c.scene = regions_from_json(j.at("scene"));
    c.character_pool = j.value("character_pool", c.character_pool);
    c.min_duration_s = j.value("min_duration_s", c.min_duration_s);
    c.max_duration_s = j.value("max_duration_s", c.max_duration_s);
    if (j.contains("split_ratios")) c.split_ratios = j.at("split_ratios").get<std::array<double, 3>>();
    c.amplitude_scale = j.value("amplitude_scale", c.amplitude_scale);
    c.native_resolution = j.value("native_resolution", c.native_resolution);
    c.render_crowd = j.value("render_crowd", c.render_crowd);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad synth config: ") + e.what());
  }
  c.validate();
  return c;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  const nlohmann::json j = read_json_file(path);
  return synth_config_from_json(j.contains("synth") ? j.at("synth") : j);
}

std::string config_hash(const SynthConfig& config) { return json_hash(to_json_value(config)); }

DatasetSummary build_dataset(int n_motions, const std::vector<std::string>& categories,
                             const SynthConfig& config, const std::filesystem::path& out_dir,
                             std::uint64_t seed) {
  if (n_motions < 1) throw ArgumentError("need at least one motion");
  config.validate();
  std::vector<std::string> cats = categories;
  if (cats.empty()) {
    for (auto name : motion_categories()) cats.emplace_back(name);
  }
  for (const auto& c : cats) category_index(c);

  const StereoRig rig(config.effective_rig());
  const std::string hash = config_hash(config);
  const std::uint64_t topo = build_topology().checksum();

  std::mt19937_64 character_rng(derive_seed(seed, "characters"));
  std::vector<CharacterProfile> pool;
  std::vector<double> lowest;
  for (int i = 0; i < config.character_pool; ++i) {
    pool.push_back(make_character(i, character_rng));
    lowest.push_back(pool.back().lowest_vertex_z());
  }

  std::mt19937_64 split_rng(derive_seed(seed, "splits"));
  const SplitAssignment assignment = split_motions(n_motions, config.split_ratios, split_rng);
  std::vector<Split> split_of(static_cast<std::size_t>(n_motions), Split::kTrain);
  for (Split s : kAllSplits) {
    for (int m : assignment.of(s)) split_of[static_cast<std::size_t>(m)] = s;
  }

  DatasetSummary summary;
  for (Split s : kAllSplits) {
    DatasetManifest& m = summary.manifests[static_cast<int>(s)];
    m.split = s;
    m.seed = seed;
    m.config_hash = hash;
    m.topology_checksum = topo;
  }

  SpawnConfig spawn = config.spawn;
  std::mt19937_64 spawn_rng(derive_seed(seed, "spawn", spawn.seed));

  try {
    std::filesystem::create_directories(out_dir);
    int next = 0;
    while (next < n_motions) {
      const SpawnResult group = place_characters(config.scene, spawn, lowest, spawn_rng);
      if (!group.warning.empty()) summary.warnings.push_back(group.warning);
      std::vector<MotionJob> jobs;
      std::vector<BodyState> scratch;
      for (const Placement& p : group.placements) {
        if (next >= n_motions) break;
        MotionJob job;
        job.index = next;
        job.category = cats[static_cast<std::size_t>(next) % cats.size()];
        job.split = split_of[static_cast<std::size_t>(next)];
        job.character = p.character;
        std::mt19937_64 motion_rng(derive_seed(seed, "motion", static_cast<std::uint64_t>(next)));
        const double duration = std::uniform_real_distribution<double>(
            config.min_duration_s, config.max_duration_s)(motion_rng);
        MotionOptions opts;
        opts.amplitude_scale = config.amplitude_scale;
        opts.start_xy = p.position.head<2>();
        opts.ground_z = p.position.z();
        job.clip = generate_motion(job.category, duration, pool[job.character], motion_rng, opts);
        jobs.push_back(std::move(job));
        ++next;
      }

      for (std::size_t w = 0; w < jobs.size(); ++w) {
        const MotionJob& job = jobs[w];
        const CharacterProfile& profile = pool[job.character];
        const std::string id = motion_name(job.index);
        const std::string split_dir = std::string(to_string(job.split));
        const std::filesystem::path clip_dir = out_dir / split_dir / id;
        std::filesystem::create_directories(clip_dir);

        ClipEntry entry;
        entry.motion_id = id;
        entry.category = job.category;
        entry.character_id = job.character;
        entry.frame_count = job.clip.frame_count;

        for (int k = 0; k < job.clip.frame_count; ++k) {
          const BodyState body = pose_frame(job.clip, k, profile);
          const Eigen::Isometry3d world_from_dev = world_from_device(body, profile);
          const Eigen::Isometry3d dev_from_world = world_from_dev.inverse();
          const Pose3D device_pose = transform_pose(body.pose, dev_from_world, PoseFrame::kDevice);

          std::vector<SceneActor> crowd;
          if (config.render_crowd) {
            for (std::size_t o = 0; o < jobs.size(); ++o) {
              if (o == w) continue;
              const MotionJob& other = jobs[o];
              const int ko = std::min(k, other.clip.frame_count - 1);
              const Pose3D world = fk_pose(other.clip, ko, pool[other.character]);
              crowd.push_back(SceneActor{transform_pose(world, dev_from_world, PoseFrame::kDevice),
                                         &pool[other.character]});
            }
          }

          RenderOptions ropts;
          ropts.background_seed = derive_seed(seed, id, static_cast<std::uint64_t>(k));
          ropts.world_from_device = world_from_dev;
          RenderedFrame frame = render_frame(device_pose, rig, profile, ropts, crowd);

          const std::string stem = "frame_" + std::to_string(k);
          const std::string rel = split_dir + "/" + id + "/" + stem;
          FrameRecord& rec = frame.record;
          rec.frame_id = k;
          rec.motion_id = id;
          rec.motion_category = job.category;
          rec.left_image = rel + ".left.png";
          rec.right_image = rel + ".right.png";
          write_png(frame.left, out_dir / rec.left_image);
          write_png(frame.right, out_dir / rec.right_image);
          save_frame_record(rec, out_dir / (rel + ".meta"));
          entry.frames.push_back(rel + ".meta");
          ++summary.frames;
        }
        summary.manifests[static_cast<int>(job.split)].clips.push_back(std::move(entry));
        ++summary.motions_per_category[job.category];
        ++summary.motions;
      }
    }

    for (auto& m : summary.manifests) {
      std::sort(m.clips.begin(), m.clips.end(),
                [](const ClipEntry& a, const ClipEntry& b) { return a.motion_id < b.motion_id; });
      save_manifest(m, manifest_path(out_dir, m.split));
    }
    nlohmann::json lock = {{"seed", std::to_string(seed)},
                           {"config_hash", hash},
                           {"motions", n_motions},
                           {"categories", cats},
                           {"config", to_json_value(config)}};
    write_json_file(lock, out_dir / "dataset.lock");
  } catch (const std::filesystem::filesystem_error& e) {
    throw DataError(std::string("cannot write dataset: ") + e.what());
  }
  return summary;
}

DatasetLock read_dataset_lock(const std::filesystem::path& root) {
  const auto path = root / "dataset.lock";
  if (!std::filesystem::exists(path)) throw DataError("dataset lock not found: " + path.string());
  const nlohmann::json j = read_json_file(path);
  DatasetLock lock;
  try {
    lock.seed = std::stoull(j.at("seed").get<std::string>());
    lock.config_hash = j.at("config_hash").get<std::string>();
    lock.motions = j.at("motions").get<int>();
    lock.categories = j.at("categories").get<std::vector<std::string>>();
  } catch (const std::exception& e) {
    throw DataError("malformed dataset lock " + path.string() + ": " + e.what());
  }
  return lock;
}

}  // namespace uego
