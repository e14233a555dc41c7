// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/train/train_config.hpp"

#include <algorithm>
#include <set>

#include "uego/core/error.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/json_io.hpp"

namespace uego {

std::string_view to_string(Strategy s) { return s == Strategy::kSeparate ? "separate" : "end2end"; }

Strategy parse_strategy(std::string_view name) {
  if (name == "separate") return Strategy::kSeparate;
  if (name == "end2end" || name == "end-to-end") return Strategy::kEnd2End;
  throw ArgumentError("unknown strategy '" + std::string(name) + "' (expected separate or end2end)");
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ArgumentError("batch size must be positive");
  if (epochs < 2 || epochs % 2 != 0) throw ArgumentError("epochs must be even and at least 2");
  if (!(base_lr > 0.0)) throw ArgumentError("base learning rate must be positive");
  if (runs < 1) throw ArgumentError("runs must be at least 1");
  if (!seeds.empty() && static_cast<int>(seeds.size()) < runs) {
    throw ArgumentError("seed list has fewer entries than runs");
  }
  const auto list = run_seeds();
  if (std::set<std::uint64_t>(list.begin(), list.end()).size() != list.size()) {
    throw ArgumentError("run seeds must be distinct");
  }
  if (loss3d_weight < 0.0) throw ArgumentError("loss_3d weight must be non-negative");
  if (!(heatmap_sigma > 0.0)) throw ArgumentError("heatmap sigma must be positive");
  if (max_train_frames < 0 || max_val_frames < 0 || max_test_frames < 0 || cache_mb < 0) {
    throw ArgumentError("frame caps and cache size must be non-negative");
  }
  pose2d.validate();
  pose3d.validate();
  if (pose3d.heatmap_size != pose2d.heatmap_size) {
    throw ArgumentError("pose3d heatmap size must match the 2D heatmap size");
  }
  if (pose3d.views != pose2d.views()) throw ArgumentError("pose3d views must match the 2D variant");
}

std::vector<std::uint64_t> TrainConfig::run_seeds() const {
  std::vector<std::uint64_t> out;
  for (int r = 0; r < runs; ++r) {
    if (!seeds.empty()) {
      out.push_back(seeds[static_cast<std::size_t>(r)]);
    } else {
      out.push_back(fnv1a64("run" + std::to_string(r), seed));
    }
  }
  return out;
}

void TrainConfig::sync_models() {
  pose3d.heatmap_size = pose2d.heatmap_size;
  pose3d.views = pose2d.views();
}

nlohmann::json to_json_value(const TrainConfig& c) {
  return {{"strategy", std::string(to_string(c.strategy))},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"base_lr", c.base_lr},
          {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
          {"runs", c.runs},
          {"seed", c.seed},
          {"seeds", c.seeds},
          {"pose2d", to_json_value(c.pose2d)},
          {"pose3d", to_json_value(c.pose3d)},
          {"gt_heatmaps_for_3d", c.gt_heatmaps_for_3d},
          {"loss3d_weight", c.loss3d_weight},
          {"heatmap_sigma", c.heatmap_sigma},
          {"max_train_frames", c.max_train_frames},
          {"max_val_frames", c.max_val_frames},
          {"max_test_frames", c.max_test_frames},
          {"cache_mb", c.cache_mb}};
}

TrainConfig train_config_from_json(const nlohmann::json& input) {
  const nlohmann::json& j = input.contains("train") ? input.at("train") : input;
  TrainConfig c;
  try {
    if (j.contains("strategy")) c.strategy = parse_strategy(j.at("strategy").get<std::string>());
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.base_lr = j.value("base_lr", c.base_lr);
    if (j.contains("adam")) {
      const auto& a = j.at("adam");
      c.adam.beta1 = a.value("beta1", c.adam.beta1);
      c.adam.beta2 = a.value("beta2", c.adam.beta2);
      c.adam.epsilon = a.value("epsilon", c.adam.epsilon);
    }
    c.runs = j.value("runs", c.runs);
    c.seed = j.value("seed", c.seed);
    c.seeds = j.value("seeds", c.seeds);
    if (j.contains("pose2d")) c.pose2d = pose2d_config_from_json(j.at("pose2d"));
    c.sync_models();
    if (j.contains("pose3d")) {
      nlohmann::json p3 = j.at("pose3d");
      if (!p3.contains("heatmap_size")) p3["heatmap_size"] = c.pose2d.heatmap_size;
      if (!p3.contains("views")) p3["views"] = c.pose2d.views();
      c.pose3d = pose3d_config_from_json(p3);
    }
    c.gt_heatmaps_for_3d = j.value("gt_heatmaps_for_3d", c.gt_heatmaps_for_3d);
    c.loss3d_weight = j.value("loss3d_weight", c.loss3d_weight);
    c.heatmap_sigma = j.value("heatmap_sigma", c.heatmap_sigma);
    c.max_train_frames = j.value("max_train_frames", c.max_train_frames);
    c.max_val_frames = j.value("max_val_frames", c.max_val_frames);
    c.max_test_frames = j.value("max_test_frames", c.max_test_frames);
    c.cache_mb = j.value("cache_mb", c.cache_mb);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad training config: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) { return train_config_from_json(read_json_file(path)); }

std::string config_hash(const TrainConfig& config) {
  nlohmann::json j = to_json_value(config);
  // Run bookkeeping does not change what a single run computes.
  j.erase("runs");
  j.erase("seed");
  j.erase("seeds");
  return json_hash(j);
}

double lr_at(double fraction, const TrainConfig& config) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ArgumentError("schedule fraction must lie in [0, 1], got " + std::to_string(fraction));
  }
  if (fraction <= 0.5) return config.base_lr;
  return config.base_lr * (1.0 - fraction) / 0.5;
}

double epoch_lr(int epoch, const TrainConfig& config) {
  if (epoch < 0 || epoch >= config.epochs) throw ArgumentError("epoch out of range");
  return lr_at((epoch + 0.5) / config.epochs, config);
}

}  // namespace uego
