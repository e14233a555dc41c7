// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "uego/core/error.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/json_io.hpp"
#include "uego/core/manifest.hpp"
#include "uego/metrics/metrics.hpp"
#include "uego/synth/categories.hpp"
#include "uego/synth/dataset_builder.hpp"
#include "uego/synth/statistics.hpp"
#include "uego/train/experiment.hpp"

#ifndef UEGO_VERSION
#define UEGO_VERSION "unknown"
#endif

namespace uego::cli {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string data;
};

struct TrainOptions {
  std::optional<std::string> strategy;
  std::optional<std::string> variant;
  std::optional<int> backbone;
  std::optional<std::string> weight_sharing;
  std::optional<int> runs;
  std::optional<int> epochs;
  std::optional<int> max_train_frames;
  bool by_category = false;
};

bool parse_switch(const std::string& s) {
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw ArgumentError("expected on/off, got '" + s + "'");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(',', start), s.size());
    std::string item = s.substr(start, end - start);
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    start = end + 1;
  }
  if (out.empty()) throw ArgumentError("empty list '" + s + "'");
  return out;
}

fs::path data_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kDataRootEnv); env && *env) return env;
  throw ArgumentError(std::string("no dataset root: pass --data or set ") + kDataRootEnv);
}

fs::path require_dataset(const fs::path& root) {
  if (!fs::exists(manifest_path(root, Split::kTrain))) {
    throw DataError("no dataset at " + root.string() + " (missing " + manifest_path(root, Split::kTrain).string() + ")");
  }
  return root;
}

nlohmann::json provenance(const std::string& command, const std::string& hash, std::uint64_t seed,
                          const std::vector<std::string>& args) {
  return {{"command", command},
          {"arguments", args},
          {"config_hash", hash},
          {"seed", seed},
          {"versions",
           {{"uego", UEGO_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"compiler", __VERSION__}}}};
}

std::string hex(std::uint64_t v) { return to_hex(v); }

TrainConfig train_config(const CommonOptions& common, const TrainOptions& t) {
  TrainConfig c = common.config.empty() ? TrainConfig{} : load_train_config(common.config);
  if (common.seed) {
    c.seed = *common.seed;
    c.seeds.clear();
  }
  if (t.strategy) c.strategy = parse_strategy(*t.strategy);
  if (t.variant) c.pose2d.variant = parse_variant(*t.variant);
  if (t.backbone) c.pose2d.backbone_depth = *t.backbone;
  if (t.weight_sharing) c.pose2d.weight_sharing = parse_switch(*t.weight_sharing);
  if (t.runs) {
    c.runs = *t.runs;
    c.seeds.clear();
  }
  if (t.epochs) c.epochs = *t.epochs;
  if (t.max_train_frames) c.max_train_frames = *t.max_train_frames;
  c.sync_models();
  c.validate();
  return c;
}

int cmd_gen(const CommonOptions& common, int motions, const std::string& categories,
            const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const SynthConfig config = common.config.empty() ? SynthConfig{} : load_synth_config(common.config);
  const std::vector<std::string> cats = categories.empty() ? std::vector<std::string>{}
                                                           : parse_category_list(categories);
  const fs::path root = common.out.empty() ? data_root(common.data) : fs::path(common.out);
  const std::uint64_t seed = common.seed.value_or(1);
  const DatasetSummary s = build_dataset(motions, cats, config, root, seed);
  std::uint64_t checksum = 0;
  for (Split split : kAllSplits) checksum = fnv1a64(hex(file_checksum(manifest_path(root, split))), checksum);
  write_json_file(provenance("gen", config_hash(config), seed, args), root / "provenance.json");
  for (const auto& w : s.warnings) err << "warning: " << w << "\n";
  out << "dataset " << root.string() << "\n";
  out << "motions " << s.motions << "\nframes " << s.frames << "\n";
  for (Split split : kAllSplits) {
    out << "  " << to_string(split) << ": " << s.manifest(split).clips.size() << " motions\n";
  }
  out << "categories " << s.motions_per_category.size() << "\n";
  for (const auto& [name, n] : s.motions_per_category) out << "  " << name << ": " << n << "\n";
  out << "manifest checksum " << hex(checksum) << "\n";
  return kExitOk;
}

int cmd_train(const CommonOptions& common, const TrainOptions& t, const std::vector<std::string>& args,
              std::ostream& out, std::ostream& err) {
  const TrainConfig config = train_config(common, t);
  const fs::path root = require_dataset(data_root(common.data));
  const fs::path dir = common.out.empty() ? fs::path("runs") : fs::path(common.out);
  DatasetSplits data = DatasetSplits::open(root, config);
  const ExperimentResult r =
      run_experiment(data, config, dir, [&](const std::string& line) { err << line << "\n" << std::flush; });
  write_json_file(provenance("train", config_hash(config), config.seed, args), dir / "provenance.json");
  if (r.summary) {
    out << format_eval_table(*r.summary, t.by_category);
  } else {
    out << "no test frames: evaluation skipped\n";
  }
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    out << "run " << k << " seed " << r.runs[k].seed << " -> " << (dir / ("run_" + std::to_string(k))).string()
        << "\n";
  }
  out << "config hash " << config_hash(config) << "\n";
  return kExitOk;
}

int cmd_eval(const CommonOptions& common, const std::string& checkpoint, const std::string& split_name,
             bool by_category, bool oracle, std::optional<int> max_frames, const std::vector<std::string>& args,
             std::ostream& out) {
  TrainConfig config;
  if (!common.config.empty()) {
    config = load_train_config(common.config);
  } else if (!checkpoint.empty() && fs::exists(fs::path(checkpoint) / "config.json")) {
    config = load_train_config(fs::path(checkpoint) / "config.json");
  } else if (!oracle) {
    throw ArgumentError("eval needs --config or a --checkpoint directory containing config.json");
  }
  config.sync_models();
  config.validate();
  if (!oracle && checkpoint.empty()) throw ArgumentError("eval needs --checkpoint unless --oracle is given");
  const fs::path root = require_dataset(data_root(common.data));
  const Split split = parse_split(split_name);
  FrameDataset data = FrameDataset::open(root, split, max_frames.value_or(0));
  if (data.empty()) throw DataError(std::string(to_string(split)) + " split of " + root.string() + " has no frames");

  EvalReport report;
  nlohmann::json extra = nlohmann::json::object();
  if (oracle) {
    std::vector<FrameError> frames;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const Pose3D& truth = data.record(i).joints_device;
      frames.push_back({data.record(i).motion_category, mpjpe(truth, truth), pa_mpjpe(truth, truth)});
    }
    report = aggregate(frames, "device");
  } else {
    PoseModel model = load_model(config, checkpoint);
    data.configure(config.pose2d, config.heatmap_sigma, config.cache_mb);
    const EvalOutput e = evaluate_model(model, data, config);
    report = e.report;
    extra = {{"visible_joints", e.visible_joints},
             {"within_two_cells", e.within_two_cells},
             {"keypoint_accuracy", e.keypoint_accuracy()}};
  }
  const std::vector<EvalReport> single{report};
  const std::string table = format_eval_table(aggregate_runs(single), by_category);
  out << table;
  if (extra.contains("keypoint_accuracy")) {
    out << "2D keypoints within two heatmap cells: " << extra["within_two_cells"].get<int>() << "/"
        << extra["visible_joints"].get<int>() << "\n";
  }
  if (!common.out.empty()) {
    const fs::path dir = common.out;
    nlohmann::json j = {{"split", std::string(to_string(split))},
                        {"oracle", oracle},
                        {"config_hash", config_hash(config)},
                        {"report", to_json_value(report)},
                        {"keypoints", extra}};
    write_json_file(j, dir / "eval.json");
    write_text_file(table, dir / "eval.txt");
    write_json_file(provenance("eval", config_hash(config), config.seed, args), dir / "provenance.json");
  }
  return kExitOk;
}

int cmd_stats(const CommonOptions& common, const std::string& splits_csv, const std::vector<std::string>& args,
              std::ostream& out) {
  const fs::path root = require_dataset(data_root(common.data));
  std::vector<Split> splits;
  for (const auto& s : split_csv(splits_csv)) splits.push_back(parse_split(s));
  const DistributionReport r = compute_distribution(root, splits);
  const std::string table = format_distribution_table(r);
  out << table;
  if (!common.out.empty()) {
    const fs::path dir = common.out;
    write_json_file(to_json_value(r), dir / "stats.json");
    auto cloud = [](const std::vector<Eigen::Vector3d>& pts) {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& p : pts) a.push_back({p.x(), p.y(), p.z()});
      return a;
    };
    write_json_file({{"head", cloud(r.head)}, {"left_foot", cloud(r.left_foot)}}, dir / "clouds.json");
    write_text_file(table, dir / "stats.txt");
    write_scatter_png(r.head, dir / "head.png");
    write_scatter_png(r.left_foot, dir / "left_foot.png");
    write_json_file(provenance("stats", read_dataset_lock(root).config_hash, common.seed.value_or(0), args),
                    dir / "provenance.json");
  }
  return kExitOk;
}

int cmd_ablate(const CommonOptions& common, const TrainOptions& t, const std::vector<int>& backbones,
               const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  TrainOptions base_opts = t;
  base_opts.strategy.reset();
  base_opts.variant.reset();
  base_opts.backbone.reset();
  base_opts.weight_sharing.reset();
  const TrainConfig base = train_config(common, base_opts);
  AblationGrid grid;
  if (!common.config.empty()) {
    const nlohmann::json j = read_json_file(common.config);
    if (j.contains("ablation")) grid = ablation_grid_from_json(j.at("ablation"));
  }
  if (!backbones.empty()) grid.backbones = backbones;
  if (t.strategy) {
    grid.strategies.clear();
    for (const auto& s : split_csv(*t.strategy)) grid.strategies.push_back(parse_strategy(s));
  }
  if (t.variant) {
    grid.variants.clear();
    for (const auto& s : split_csv(*t.variant)) grid.variants.push_back(parse_variant(s));
  }
  if (t.weight_sharing) {
    grid.weight_sharing.clear();
    for (const auto& s : split_csv(*t.weight_sharing)) grid.weight_sharing.push_back(parse_switch(s));
  }
  const fs::path root = require_dataset(data_root(common.data));
  const fs::path dir = common.out.empty() ? fs::path("ablation") : fs::path(common.out);
  DatasetSplits data = DatasetSplits::open(root, base);
  const auto results =
      ablation_suite(data, grid, base, dir, [&](const std::string& line) { err << line << "\n" << std::flush; });
  write_json_file(provenance("ablate", config_hash(base), base.seed, args), dir / "provenance.json");
  out << format_ablation_table(results);
  bool any_ok = false;
  for (const auto& r : results) any_ok = any_ok || r.result.has_value();
  return any_ok ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stereo egocentric 3D pose estimation: data generation, training and evaluation", "uego"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(UEGO_VERSION));

  CommonOptions common;
  TrainOptions train;
  int motions = 30;
  std::string categories;
  std::string backbones;
  std::string checkpoint;
  std::string split = "test";
  std::string stat_splits = "train,val,test";
  bool oracle = false;
  std::optional<int> max_frames;

  const std::string data_help = std::string("Dataset root (default: $") + kDataRootEnv + ")";
  auto add_common = [&](CLI::App* sub, const std::string& config_help, const std::string& out_help) {
    sub->add_option("--config", common.config, config_help)->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--out", common.out, out_help);
  };
  auto add_training = [&](CLI::App* sub, bool lists) {
    const std::string l = lists ? " (comma-separated list)" : "";
    sub->add_option("--data", common.data, data_help);
    sub->add_option("--strategy", train.strategy, "separate or end2end" + l);
    sub->add_option("--variant", train.variant, "stereo-shared, stereo-dual or monocular" + l);
    sub->add_option("--weight-sharing", train.weight_sharing, "Share the stereo encoder: on or off" + l);
    sub->add_option("--runs", train.runs, "Independent runs with derived seeds");
    sub->add_option("--epochs", train.epochs, "Training epochs (even)");
    sub->add_option("--max-train-frames", train.max_train_frames, "Evenly strided training subset, 0 = all");
    sub->add_flag("--by-category", train.by_category, "Print the per-category table");
  };

  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic stereo dataset");
  add_common(gen, "Synthesis config JSON", std::string("Output directory (default: $") + kDataRootEnv + ")");
  gen->add_option("--motions", motions, "Number of motion clips")->check(CLI::PositiveNumber);
  gen->add_option("--categories", categories, "Comma-separated motion categories (default: all 30)");

  CLI::App* tr = app.add_subcommand("train", "Train the 2D and 3D modules and evaluate on the test split");
  add_common(tr, "Training config JSON", "Run directory (default: runs)");
  add_training(tr, false);
  tr->add_option("--backbone", train.backbone, "ResNet depth: 18, 34, 50 or 101");

  CLI::App* ev = app.add_subcommand("eval", "Evaluate a checkpoint, or ground truth with --oracle");
  add_common(ev, "Training config JSON (default: <checkpoint>/config.json)", "Directory for eval.json and eval.txt");
  ev->add_option("--data", common.data, data_help);
  ev->add_option("--checkpoint", checkpoint, "Run directory holding checkpoints");
  ev->add_option("--split", split, "train, val or test");
  ev->add_option("--max-frames", max_frames, "Evenly strided subset, 0 = all");
  ev->add_flag("--by-category", train.by_category, "Print the per-category table");
  ev->add_flag("--oracle", oracle, "Feed ground-truth poses as predictions");

  CLI::App* st = app.add_subcommand("stats", "Pelvis-relative head and left-foot distributions");
  add_common(st, "Unused; accepted for symmetry", "Directory for tables and scatter plots");
  st->add_option("--data", common.data, data_help);
  st->add_option("--splits", stat_splits, "Comma-separated splits");

  CLI::App* ab = app.add_subcommand("ablate", "Run an ablation grid, isolating failing cells");
  add_common(ab, "Training config JSON, optionally with an \"ablation\" grid", "Output directory (default: ablation)");
  add_training(ab, true);
  ab->add_option("--backbone", backbones, "ResNet depths (comma-separated list)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("uego");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(common, motions, categories, args, out, err);
    if (tr->parsed()) return cmd_train(common, train, args, out, err);
    if (ev->parsed()) {
      return cmd_eval(common, checkpoint, split, train.by_category, oracle, max_frames, args, out);
    }
    if (st->parsed()) return cmd_stats(common, stat_splits, args, out);
    if (ab->parsed()) {
      std::vector<int> depths;
      if (!backbones.empty()) {
        for (const auto& d : split_csv(backbones)) {
          try {
            depths.push_back(std::stoi(d));
          } catch (const std::exception&) {
            throw ArgumentError("backbone depth '" + d + "' is not a number");
          }
        }
      }
      return cmd_ablate(common, train, depths, args, out, err);
    }
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "data error: malformed config: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace uego::cli
