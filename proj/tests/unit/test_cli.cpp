// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "uego/cli/app.hpp"
#include "uego/core/json_io.hpp"
#include "uego/core/manifest.hpp"
#include "uego/synth/dataset_builder.hpp"
#include "uego/train/experiment.hpp"

using namespace uego;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

std::string line_with(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key, 0) == 0) return line;
  }
  return {};
}

/// Small renders and clips so every command finishes in well under a second.
fs::path write_configs(const fs::path& dir) {
  write_text_file(R"({"rig": {"image_size": 64, "heatmap_size": 16},
                      "min_duration_s": 0.32, "max_duration_s": 0.32,
                      "split_ratios": [0.5, 0.25, 0.25]})",
                  dir / "synth.json");
  write_text_file(R"({"rig": {"image_size": 64, "heatmap_size": 16},
                      "min_duration_s": 0.04, "max_duration_s": 0.04,
                      "split_ratios": [1.0, 0.0, 0.0]})",
                  dir / "single.json");
  write_text_file(R"({"train": {"batch_size": 4, "epochs": 2, "runs": 1,
                      "pose2d": {"base_width": 4, "encoder_stages": 2, "image_size": 32, "heatmap_size": 8},
                      "pose3d": {"base_channels": 4, "encoder_stages": 2, "embedding_dim": 16,
                                 "pose_hidden": 16}}})",
                  dir / "train.json");
  return dir;
}

}  // namespace

TEST_CASE("gen writes the requested motions and is reproducible") {
  test::TempDir dir;
  write_configs(dir.path());
  const std::string synth = (dir.path() / "synth.json").string();
  const Result a = run({"gen", "--config", synth, "--motions", "30", "--seed", "7", "--out", (dir.path() / "a").string()});
  REQUIRE(a.code == 0);
  CHECK(line_with(a.out, "motions ") == "motions 30");
  int clips = 0;
  for (Split s : kAllSplits) clips += static_cast<int>(load_manifest(manifest_path(dir.path() / "a", s), dir.path() / "a").clips.size());
  CHECK(clips == 30);

  const Result b = run({"gen", "--config", synth, "--motions", "30", "--seed", "7", "--out", (dir.path() / "b").string()});
  REQUIRE(b.code == 0);
  CHECK(line_with(a.out, "manifest checksum") == line_with(b.out, "manifest checksum"));
  CHECK(read_text(dir.path() / "a" / "provenance.json") != "");

  const Result c = run({"gen", "--config", synth, "--motions", "6", "--categories", "jumping,boxing", "--out",
                        (dir.path() / "c").string()});
  REQUIRE(c.code == 0);
  CHECK(line_with(c.out, "categories ") == "categories 2");
  for (Split s : kAllSplits) {
    for (const auto& clip : load_manifest(manifest_path(dir.path() / "c", s), dir.path() / "c").clips) {
      CHECK((clip.category == "jumping" || clip.category == "boxing"));
    }
  }
}

TEST_CASE("exit codes follow the scripting contract") {
  test::TempDir dir;
  write_configs(dir.path());
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"train", "--no-such-flag"}).code == 1);
  CHECK(run({"gen", "--motions", "0", "--out", dir.path().string()}).code == 1);
  CHECK(run({"gen", "--categories", "juggling", "--out", dir.path().string()}).code == 1);
  const Result missing = run({"train", "--data", (dir.path() / "absent").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find((dir.path() / "absent").string()) != std::string::npos);
  write_text_file("{not json", dir.path() / "broken.json");
  CHECK(run({"gen", "--config", (dir.path() / "broken.json").string(), "--out", dir.path().string()}).code == 2);
  CHECK(run({"train", "--config", (dir.path() / "train.json").string(), "--data", dir.path().string(),
             "--strategy", "sideways"})
            .code == 1);
}

TEST_CASE("train, eval and their reports") {
  test::TempDir dir;
  write_configs(dir.path());
  const fs::path data = dir.path() / "data";
  REQUIRE(run({"gen", "--config", (dir.path() / "synth.json").string(), "--motions", "6", "--categories",
               "jumping,boxing", "--out", data.string()})
              .code == 0);
  const std::string cfg = (dir.path() / "train.json").string();

  SUBCASE("separate training writes one report and two checkpoints") {
    const fs::path out = dir.path() / "sep";
    const Result r = run({"train", "--config", cfg, "--data", data.string(), "--strategy", "separate", "--runs", "1",
                          "--seed", "1", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(out / "run_0" / "report.json"));
    CHECK(fs::exists(out / "run_0" / "pose2d.ckpt"));
    CHECK(fs::exists(out / "run_0" / "pose3d.ckpt"));
    CHECK_FALSE(fs::exists(out / "run_1"));
    CHECK(read_json_file(out / "provenance.json").at("seed") == 1);

    const Result e1 = run({"eval", "--checkpoint", (out / "run_0").string(), "--data", data.string(),
                           "--by-category", "--out", (dir.path() / "e1").string()});
    REQUIRE(e1.code == 0);
    CHECK(count_lines(read_text(dir.path() / "e1" / "eval.txt")) == 32);
    const Result e2 = run({"eval", "--checkpoint", (out / "run_0").string(), "--data", data.string(),
                           "--by-category", "--out", (dir.path() / "e2").string()});
    CHECK(read_text(dir.path() / "e1" / "eval.json") == read_text(dir.path() / "e2" / "eval.json"));

    write_text_file(R"({"train": {"batch_size": 4, "epochs": 2, "runs": 1,
                        "pose2d": {"base_width": 8, "encoder_stages": 2, "image_size": 32, "heatmap_size": 8},
                        "pose3d": {"base_channels": 4, "encoder_stages": 2, "embedding_dim": 16,
                                   "pose_hidden": 16}}})",
                    dir.path() / "wide.json");
    const Result refused = run({"eval", "--checkpoint", (out / "run_0").string(), "--config",
                                (dir.path() / "wide.json").string(), "--data", data.string()});
    CHECK(refused.code == 2);
    CHECK(refused.err.find("config") != std::string::npos);
  }

  SUBCASE("end-to-end training writes one combined checkpoint") {
    const fs::path out = dir.path() / "e2e";
    REQUIRE(run({"train", "--config", cfg, "--data", data.string(), "--strategy", "end2end", "--out", out.string()})
                .code == 0);
    CHECK(fs::exists(out / "run_0" / "model.ckpt"));
    CHECK_FALSE(fs::exists(out / "run_0" / "pose2d.ckpt"));
  }

  SUBCASE("monocular baseline") {
    const fs::path out = dir.path() / "mono";
    REQUIRE(run({"train", "--config", cfg, "--data", data.string(), "--variant", "monocular", "--out", out.string()})
                .code == 0);
    CHECK(read_json_file(out / "run_0" / "config.json").at("train").at("pose2d").at("variant") == "monocular");
  }

  SUBCASE("oracle evaluation and the data-root variable") {
    ::setenv(cli::kDataRootEnv, data.string().c_str(), 1);
    const Result r = run({"eval", "--oracle", "--by-category"});
    ::unsetenv(cli::kDataRootEnv);
    REQUIRE(r.code == 0);
    CHECK(count_lines(r.out) == 32);
    CHECK(line_with(r.out, "overall").find("0.00             0.00") != std::string::npos);
  }

  SUBCASE("ablate runs the grid and tolerates a bad cell") {
    const fs::path out = dir.path() / "abl";
    const Result r = run({"ablate", "--config", cfg, "--data", data.string(), "--backbone", "18,19",
                          "--weight-sharing", "on,off", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(count_lines(r.out) == 5);
    CHECK(r.out.find("failed") != std::string::npos);
    CHECK(fs::exists(out / "ablation.json"));
  }
}

TEST_CASE("stats distributions") {
  test::TempDir dir;
  write_configs(dir.path());
  const std::string synth = (dir.path() / "synth.json").string();

  const fs::path single = dir.path() / "single";
  REQUIRE(run({"gen", "--config", (dir.path() / "single.json").string(), "--motions", "1", "--out", single.string()})
              .code == 0);
  REQUIRE(run({"stats", "--data", single.string(), "--out", (dir.path() / "s1").string()}).code == 0);
  const auto s1 = read_json_file(dir.path() / "s1" / "stats.json");
  CHECK(s1.at("frames") == 1);
  for (const char* joint : {"head", "left_foot"}) {
    for (double v : s1.at(joint).at("variance").get<std::vector<double>>()) CHECK(v == 0.0);
  }
  CHECK(fs::exists(dir.path() / "s1" / "head.png"));
  CHECK(fs::exists(dir.path() / "s1" / "left_foot.png"));

  const Result trained = run({"train", "--config", (dir.path() / "train.json").string(), "--data", single.string(),
                              "--out", (dir.path() / "single_runs").string()});
  CHECK(trained.code == 0);
  CHECK(trained.out.find("no test frames") != std::string::npos);
  CHECK(fs::exists(dir.path() / "single_runs" / "run_0" / "report.json"));
  CHECK(run({"ablate", "--config", (dir.path() / "train.json").string(), "--data", single.string(), "--out",
             (dir.path() / "single_abl").string()})
            .code == 2);

  const fs::path standing = dir.path() / "standing";
  REQUIRE(run({"gen", "--config", synth, "--motions", "10", "--categories", "standing - whole body", "--out",
               standing.string()})
              .code == 0);
  REQUIRE(run({"stats", "--data", standing.string(), "--out", (dir.path() / "s2").string()}).code == 0);
  const auto s2 = read_json_file(dir.path() / "s2" / "stats.json");
  const auto clouds = read_json_file(dir.path() / "s2" / "clouds.json");
  REQUIRE(clouds.at("head").size() == s2.at("frames").get<std::size_t>());
  for (const auto& p : clouds.at("head")) CHECK(p[2].get<double>() > 0.0);

  const fs::path mixed = dir.path() / "mixed";
  REQUIRE(run({"gen", "--config", synth, "--motions", "30", "--out", mixed.string()}).code == 0);
  REQUIRE(run({"stats", "--data", mixed.string(), "--out", (dir.path() / "s3").string()}).code == 0);
  const auto s3 = read_json_file(dir.path() / "s3" / "stats.json");
  double var_standing = 0.0;
  double var_mixed = 0.0;
  for (double v : s2.at("head").at("variance").get<std::vector<double>>()) var_standing += v;
  for (double v : s3.at("head").at("variance").get<std::vector<double>>()) var_mixed += v;
  CHECK(var_mixed > var_standing);

  CHECK(run({"stats", "--data", (dir.path() / "none").string()}).code == 2);
}

TEST_CASE("shipped configs load") {
  const fs::path dir = fs::path(UEGO_SOURCE_DIR) / "configs";
  int synth = 0;
  int train = 0;
  int grids = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    CAPTURE(e.path().string());
    const std::string name = e.path().filename().string();
    if (name.rfind("synth_", 0) == 0) {
      CHECK_NOTHROW(load_synth_config(e.path()).validate());
      ++synth;
      continue;
    }
    const TrainConfig c = load_train_config(e.path());
    CHECK_NOTHROW(c.validate());
    ++train;
    const auto j = read_json_file(e.path());
    if (j.contains("ablation")) {
      CHECK_FALSE(ablation_grid_from_json(j.at("ablation")).cells().empty());
      ++grids;
    }
  }
  CHECK(synth == 2);
  CHECK(train == 5);
  CHECK(grids == 3);
}
