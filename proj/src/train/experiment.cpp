// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/train/experiment.hpp"

#include <cstdio>

#include "uego/core/error.hpp"
#include "uego/core/json_io.hpp"

namespace uego {

DatasetSplits DatasetSplits::open(const std::filesystem::path& root, const TrainConfig& config) {
  DatasetSplits d{FrameDataset::open(root, Split::kTrain, config.max_train_frames),
                  FrameDataset::open(root, Split::kVal, config.max_val_frames),
                  FrameDataset::open(root, Split::kTest, config.max_test_frames)};
  return d;
}

ExperimentResult run_experiment(DatasetSplits& data, const TrainConfig& config,
                                const std::optional<std::filesystem::path>& out_dir, const ProgressFn& progress) {
  config.validate();
  for (FrameDataset* d : {&data.train, &data.val, &data.test}) {
    d->configure(config.pose2d, config.heatmap_sigma, config.cache_mb / 3);
  }
  ExperimentResult result;
  std::vector<EvalReport> evals;
  const std::vector<std::uint64_t> seeds = config.run_seeds();
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    if (progress) progress("run " + std::to_string(k + 1) + "/" + std::to_string(seeds.size()) + " seed " +
                           std::to_string(seeds[k]));
    PoseModel model = PoseModel::create(config, seeds[k]);
    RunReport r = train_run(model, data.train, data.val.empty() ? nullptr : &data.val, config, seeds[k], progress);
    if (!data.test.empty()) {
      r.test = evaluate_model(model, data.test, config).report;
      evals.push_back(*r.test);
    }
    if (out_dir) {
      const auto dir = *out_dir / ("run_" + std::to_string(k));
      save_model(model, config, dir);
      write_json_file({{"train", to_json_value(config)}}, dir / "config.json");
      write_json_file(to_json_value(r), dir / "report.json");
      write_json_file({{"wall_seconds", r.wall_seconds}}, dir / "timing.json");
    }
    result.runs.push_back(std::move(r));
  }
  if (evals.empty()) return result;
  result.summary = aggregate_runs(evals);
  if (out_dir) {
    write_json_file({{"config", to_json_value(config)},
                     {"config_hash", config_hash(config)},
                     {"seeds", seeds},
                     {"summary", to_json_value(*result.summary)}},
                    *out_dir / "summary.json");
    write_text_file(format_eval_table(*result.summary, true), *out_dir / "table.txt");
  }
  return result;
}

std::string AblationCell::label() const {
  return std::string(to_string(variant)) + "/r" + std::to_string(backbone) + "/" +
         (weight_sharing ? "shared" : "unshared") + "/" + std::string(to_string(strategy));
}

TrainConfig AblationCell::apply(TrainConfig base) const {
  base.pose2d.backbone_depth = backbone;
  base.pose2d.weight_sharing = weight_sharing;
  base.pose2d.variant = variant;
  base.strategy = strategy;
  base.sync_models();
  base.validate();
  return base;
}

std::vector<AblationCell> AblationGrid::cells() const {
  std::vector<AblationCell> out;
  for (Variant v : variants) {
    for (int b : backbones) {
      for (bool ws : weight_sharing) {
        if (!ws && v != Variant::kStereoShared) continue;
        for (Strategy s : strategies) out.push_back({b, ws, s, v});
      }
    }
  }
  // A variant whose only listed sharing value was skipped still gets a cell.
  for (Variant v : variants) {
    if (v == Variant::kStereoShared) continue;
    bool present = false;
    for (const auto& c : out) present = present || c.variant == v;
    if (present) continue;
    for (int b : backbones) {
      for (Strategy s : strategies) out.push_back({b, true, s, v});
    }
  }
  return out;
}

AblationGrid ablation_grid_from_json(const nlohmann::json& j) {
  AblationGrid g;
  try {
    if (j.contains("backbones")) g.backbones = j.at("backbones").get<std::vector<int>>();
    if (j.contains("weight_sharing")) g.weight_sharing = j.at("weight_sharing").get<std::vector<bool>>();
    if (j.contains("strategies")) {
      g.strategies.clear();
      for (const auto& s : j.at("strategies")) g.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    if (j.contains("variants")) {
      g.variants.clear();
      for (const auto& v : j.at("variants")) g.variants.push_back(parse_variant(v.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad ablation grid: ") + e.what());
  }
  if (g.backbones.empty() || g.weight_sharing.empty() || g.strategies.empty() || g.variants.empty()) {
    throw ArgumentError("every ablation axis needs at least one value");
  }
  return g;
}

nlohmann::json to_json_value(const AblationGrid& g) {
  nlohmann::json s = nlohmann::json::array();
  for (Strategy x : g.strategies) s.push_back(std::string(to_string(x)));
  nlohmann::json v = nlohmann::json::array();
  for (Variant x : g.variants) v.push_back(std::string(to_string(x)));
  return {{"backbones", g.backbones}, {"weight_sharing", g.weight_sharing}, {"strategies", s}, {"variants", v}};
}

std::vector<CellResult> ablation_suite(DatasetSplits& data, const AblationGrid& grid, const TrainConfig& base,
                                       const std::optional<std::filesystem::path>& out_dir,
                                       const ProgressFn& progress) {
  if (data.test.empty()) throw DataError("ablation needs test frames to compare cells");
  std::vector<CellResult> results;
  const auto cells = grid.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CellResult r;
    r.cell = cells[i];
    if (progress) progress("cell " + std::to_string(i + 1) + "/" + std::to_string(cells.size()) + " " + r.cell.label());
    try {
      const TrainConfig config = r.cell.apply(base);
      const PoseModel probe = PoseModel::create(config, 0);
      r.params_2d = probe.net2d->parameters().scalar_count();
      r.encoder_params = probe.net2d->encoder_parameters().scalar_count();
      std::optional<std::filesystem::path> dir;
      if (out_dir) dir = *out_dir / ("cell_" + std::to_string(i));
      r.result = run_experiment(data, config, dir, progress);
    } catch (const std::exception& e) {
      r.error = e.what();
      if (progress) progress("cell failed: " + r.error);
    }
    results.push_back(std::move(r));
  }
  if (out_dir) {
    write_json_file(to_json_value(results), *out_dir / "ablation.json");
    write_text_file(format_ablation_table(results), *out_dir / "ablation.txt");
  }
  return results;
}

std::string format_ablation_table(const std::vector<CellResult>& results) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-15s %-9s %-8s %-9s %12s %12s %16s %16s\n", "Variant", "Backbone", "Sharing",
                "Strategy", "2D params", "Enc params", "MPJPE (mm)", "PA-MPJPE (mm)");
  out += line;
  for (const CellResult& r : results) {
    std::string a = "failed";
    std::string b = "-";
    if (r.result) {
      const int runs = static_cast<int>(r.result->runs.size());
      a = format_mean_sigma(r.result->summary->mpjpe, runs);
      b = format_mean_sigma(r.result->summary->pa_mpjpe, runs);
    }
    std::snprintf(line, sizeof(line), "%-15s %-9s %-8s %-9s %12zu %12zu %16s %16s\n",
                  std::string(to_string(r.cell.variant)).c_str(), ("ResNet" + std::to_string(r.cell.backbone)).c_str(),
                  r.cell.weight_sharing ? "on" : "off", std::string(to_string(r.cell.strategy)).c_str(), r.params_2d,
                  r.encoder_params, a.c_str(), b.c_str());
    out += line;
  }
  return out;
}

nlohmann::json to_json_value(const std::vector<CellResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CellResult& r : results) {
    nlohmann::json j = {{"label", r.cell.label()},
                        {"variant", std::string(to_string(r.cell.variant))},
                        {"backbone", r.cell.backbone},
                        {"weight_sharing", r.cell.weight_sharing},
                        {"strategy", std::string(to_string(r.cell.strategy))},
                        {"params_2d", r.params_2d},
                        {"encoder_params", r.encoder_params}};
    if (r.result) {
      j["summary"] = to_json_value(*r.result->summary);
      nlohmann::json runs = nlohmann::json::array();
      for (const auto& run : r.result->runs) runs.push_back(to_json_value(run));
      j["runs"] = runs;
    } else {
      j["error"] = r.error;
    }
    arr.push_back(j);
  }
  return arr;
}

}  // namespace uego
