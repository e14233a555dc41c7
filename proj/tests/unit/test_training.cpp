// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "test_support.hpp"
#include "uego/core/error.hpp"
#include "uego/nn/checkpoint.hpp"
#include "uego/nn/gradcheck.hpp"
#include "uego/synth/dataset_builder.hpp"
#include "uego/train/experiment.hpp"
#include "uego/train/trainer.hpp"

using namespace uego;

namespace {

TrainConfig tiny_config() {
  TrainConfig c;
  c.batch_size = 4;
  c.epochs = 2;
  c.runs = 1;
  c.pose2d.base_width = 4;
  c.pose2d.encoder_stages = 2;
  c.pose2d.image_size = 32;
  c.pose2d.heatmap_size = 8;
  c.pose3d.base_channels = 4;
  c.pose3d.encoder_stages = 2;
  c.pose3d.embedding_dim = 16;
  c.pose3d.pose_hidden = 16;
  c.sync_models();
  return c;
}

/// Six short motions rendered at 64 px, shared by every test in this file.
const std::filesystem::path& tiny_dataset() {
  static test::TempDir dir;
  static bool built = false;
  if (!built) {
    SynthConfig s;
    s.rig.image_size = 64;
    s.rig.heatmap_size = 16;
    s.min_duration_s = 0.32;
    s.max_duration_s = 0.32;
    s.split_ratios = {0.5, 0.25, 0.25};
    build_dataset(8, {"jumping", "standing - forward"}, s, dir.path(), 3);
    built = true;
  }
  return dir.path();
}

DatasetSplits open_tiny(const TrainConfig& c) {
  DatasetSplits d = DatasetSplits::open(tiny_dataset(), c);
  for (FrameDataset* f : {&d.train, &d.val, &d.test}) f->configure(c.pose2d, c.heatmap_sigma, 64);
  return d;
}

template <typename T>
nn::Tensor<T> random_tensor(int c, int h, int w, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  nn::Tensor<T> t(c, h, w);
  for (T& v : t.data) v = static_cast<T>(n(rng));
  return t;
}

}  // namespace

TEST_CASE("learning-rate schedule") {
  const TrainConfig c;
  CHECK(lr_at(0.3, c) == 1e-3);
  CHECK(lr_at(0.5, c) == 1e-3);
  CHECK(lr_at(1.0, c) == 0.0);
  CHECK(lr_at(0.75, c) == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(lr_at(0.5 + 1e-12, c) == doctest::Approx(1e-3));
  double prev = lr_at(0.0, c);
  for (int i = 1; i <= 1000; ++i) {
    const double v = lr_at(i / 1000.0, c);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(lr_at(-0.01, c), ArgumentError);
  CHECK_THROWS_AS(lr_at(1.01, c), ArgumentError);
  for (int e = 0; e < 5; ++e) CHECK(epoch_lr(e, c) == 1e-3);
  CHECK(epoch_lr(5, c) == doctest::Approx(9e-4));
  CHECK(epoch_lr(9, c) == doctest::Approx(1e-4));
  CHECK_THROWS_AS(epoch_lr(10, c), ArgumentError);
}

TEST_CASE("training config defaults, validation and json round trip") {
  TrainConfig c;
  CHECK(c.batch_size == 16);
  CHECK(c.epochs == 10);
  CHECK(c.base_lr == 1e-3);
  CHECK(c.runs == 3);
  CHECK(c.pose3d.weights.pose == 0.1);
  const auto seeds = c.run_seeds();
  CHECK(seeds.size() == 3);
  CHECK(seeds[0] != seeds[1]);

  c.epochs = 5;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = TrainConfig{};
  c.seeds = {4, 4, 5};
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = TrainConfig{};
  c.pose2d.variant = Variant::kMonocular;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c.sync_models();
  CHECK_NOTHROW(c.validate());

  c.strategy = Strategy::kEnd2End;
  c.loss3d_weight = 0.5;
  const TrainConfig back = train_config_from_json({{"train", to_json_value(c)}});
  CHECK(back.strategy == Strategy::kEnd2End);
  CHECK(back.pose3d.views == 1);
  CHECK(back.loss3d_weight == 0.5);
  CHECK(config_hash(back) == config_hash(c));
  TrainConfig other = c;
  other.seed = 99;
  CHECK(config_hash(other) == config_hash(c));
  other.batch_size = 8;
  CHECK(config_hash(other) != config_hash(c));
  CHECK_THROWS_AS(parse_strategy("joint"), ArgumentError);
}

TEST_CASE("datasets load frames, scale keypoints and report missing data") {
  const TrainConfig c = tiny_config();
  DatasetSplits d = open_tiny(c);
  REQUIRE(d.train.size() > 0);
  const TrainingSample s = d.train.sample(0);
  CHECK(s.left.h == 32);
  CHECK(s.heatmaps_left.c == 15);
  CHECK(s.heatmaps_left.h == 8);
  CHECK(s.pose == d.train.record(0).joints_device.joints.cast<float>());
  const Keypoints2D k = d.train.scaled_keypoints(0, false);
  CHECK(k.points[3].u == doctest::Approx(d.train.record(0).keypoints.left.points[3].u / 2.0));
  CHECK_THROWS_AS(FrameDataset::open(tiny_dataset() / "nowhere", Split::kTrain), DataError);
  const FrameDataset capped = FrameDataset::open(tiny_dataset(), Split::kTrain, 3);
  CHECK(capped.size() == 3);
}

TEST_CASE("separate training keeps the 2D module frozen in phase two") {
  const TrainConfig c = tiny_config();
  DatasetSplits d = open_tiny(c);
  PoseModel m = PoseModel::create(c, 7);
  const RunReport r = train_separate(m, d.train, &d.val, c, 7);
  CHECK(r.frozen_2d_verified);
  REQUIRE(r.phase1.size() == 2);
  REQUIRE(r.phase2.size() == 2);
  for (const auto& e : r.phase2) CHECK(e.checksum_2d == r.phase1.back().checksum_2d);
  CHECK(r.checksum_2d == r.phase1.back().checksum_2d);
  CHECK(std::isfinite(r.phase1[0].train_loss_2d));
  CHECK(r.phase1[0].train_loss_2d > 0.0);
  CHECK(std::isfinite(r.phase2[0].val_loss_3d));
}

TEST_CASE("training is deterministic for a seed") {
  TrainConfig c = tiny_config();
  DatasetSplits d = open_tiny(c);
  for (Strategy s : {Strategy::kSeparate, Strategy::kEnd2End}) {
    c.strategy = s;
    PoseModel a = PoseModel::create(c, 11);
    PoseModel b = PoseModel::create(c, 11);
    PoseModel other = PoseModel::create(c, 12);
    const RunReport ra = train_run(a, d.train, &d.val, c, 11);
    const RunReport rb = train_run(b, d.train, &d.val, c, 11);
    const RunReport ro = train_run(other, d.train, &d.val, c, 12);
    CHECK(to_json_value(ra).dump() == to_json_value(rb).dump());
    CHECK(ra.checksum_3d == rb.checksum_3d);
    CHECK(ra.checksum_2d != ro.checksum_2d);
  }
}

TEST_CASE("end-to-end training with a zero 3D weight equals pure 2D training") {
  TrainConfig c = tiny_config();
  DatasetSplits d = open_tiny(c);
  PoseModel separate = PoseModel::create(c, 5);
  const RunReport rs = train_separate(separate, d.train, nullptr, c, 5);
  c.strategy = Strategy::kEnd2End;
  c.loss3d_weight = 0.0;
  PoseModel joint = PoseModel::create(c, 5);
  const RunReport rj = train_end2end(joint, d.train, nullptr, c, 5);
  const auto pa = separate.net2d->parameters().items();
  const auto pb = joint.net2d->parameters().items();
  REQUIRE(pa.size() == pb.size());
  double max_diff = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    max_diff = std::max<double>(max_diff, (pa[i]->value - pb[i]->value).cwiseAbs().maxCoeff());
  }
  CHECK(max_diff < 1e-9);
  CHECK(rs.phase1.back().checksum_2d == rj.phase1.back().checksum_2d);

  c.loss3d_weight = 1.0;
  PoseModel coupled = PoseModel::create(c, 5);
  const RunReport rc = train_end2end(coupled, d.train, nullptr, c, 5);
  CHECK(rc.phase1.back().checksum_2d != rs.phase1.back().checksum_2d);
}

TEST_CASE("loss_3d gradients reach the 2D encoder in end-to-end training") {
  std::mt19937_64 rng(21);
  Pose2DConfig c2;
  c2.base_width = 2;
  c2.encoder_stages = 2;
  c2.image_size = 32;
  c2.heatmap_size = 8;
  c2.zero_init_residual = false;
  c2.head_init_std = 0.0;
  Pose3DConfig c3;
  c3.heatmap_size = 8;
  c3.base_channels = 3;
  c3.encoder_stages = 2;
  c3.embedding_dim = 16;
  c3.pose_hidden = 12;
  c3.output_scale_cm = 1.0;
  Pose2DNet<double> net2d(c2, 1);
  Pose3DNet<double> net3d(c3, 2);
  const auto left = random_tensor<double>(3, 32, 32, rng);
  const auto right = random_tensor<double>(3, 32, 32, rng);
  const auto hl = random_tensor<double>(15, 8, 8, rng);
  const auto hr = random_tensor<double>(15, 8, 8, rng);
  PoseMatrix<double> truth = PoseMatrix<double>::Random();

  nn::ParameterList<double> enc = net2d.encoder_parameters();
  nn::ParameterList<double> all2d = net2d.parameters();
  nn::ParameterList<double> all3d = net3d.parameters();
  auto zero = [&] {
    all2d.zero_grad();
    all3d.zero_grad();
  };
  zero();
  accumulate_2d(net2d, left, right, hl, hr);
  std::vector<std::decay_t<decltype(enc.items()[0]->grad)>> only_2d;
  for (const auto& p : enc.items()) only_2d.push_back(p->grad);
  zero();
  accumulate_end2end(net2d, net3d, left, right, hl, hr, truth, 1.0);
  double diff = 0.0;
  for (std::size_t i = 0; i < enc.size(); ++i) diff += (enc.items()[i]->grad - only_2d[i]).cwiseAbs().sum();
  CHECK(diff > 0.0);

  // Finite-difference probe of the combined loss on encoder parameters.
  auto evaluate = [&](bool with_grad) {
    if (with_grad) {
      zero();
      return accumulate_end2end(net2d, net3d, left, right, hl, hr, truth, 1.0).total;
    }
    nn::NoGradGuard guard;
    const auto o2 = net2d.forward(left, right);
    const double l2 = loss_2d_sample<double>(o2.left, o2.right, hl, hr, nullptr, nullptr);
    const auto o3 = net3d.forward(o2.left, o2.right);
    return l2 + loss_3d_sample<double>(truth, o3.pose, o2.left, o2.right, o3.recon_left, o3.recon_right, c3.weights,
                                       nullptr)
                    .total;
  };
  const nn::GradCheckResult res = nn::check_gradients(enc, evaluate, rng, {.probes = 40});
  INFO("worst " << res.worst_parameter << " err " << res.max_relative_error);
  CHECK(res.ok());
}

TEST_CASE("checkpoints round trip and refuse a different configuration") {
  TrainConfig c = tiny_config();
  test::TempDir dir;
  const PoseModel m = PoseModel::create(c, 3);
  CHECK(save_model(m, c, dir.path()).size() == 2);
  const PoseModel back = load_model(c, dir.path());
  CHECK(nn::parameter_checksum(back.parameters()) == nn::parameter_checksum(m.parameters()));
  TrainConfig wider = c;
  wider.pose2d.base_width = 8;
  CHECK_THROWS_AS(load_model(wider, dir.path()), DataError);
  CHECK_THROWS_AS(load_model(c, dir.path() / "missing"), DataError);

  c.strategy = Strategy::kEnd2End;
  test::TempDir joint;
  CHECK(save_model(m, c, joint.path()).size() == 1);
  CHECK(nn::parameter_checksum(load_model(c, joint.path()).parameters()) == nn::parameter_checksum(m.parameters()));
}

TEST_CASE("evaluation reports every test frame") {
  const TrainConfig c = tiny_config();
  DatasetSplits d = open_tiny(c);
  PoseModel m = PoseModel::create(c, 3);
  const EvalOutput out = evaluate_model(m, d.test, c);
  CHECK(out.report.frames == d.test.size());
  CHECK(out.predictions.size() == d.test.size());
  CHECK(out.visible_joints > 0);
  CHECK(out.report.mpjpe > 0.0);
}

TEST_CASE("experiments train without a test split and skip the summary") {
  const TrainConfig c = tiny_config();
  test::TempDir dir;
  SynthConfig s;
  s.rig.image_size = 64;
  s.rig.heatmap_size = 16;
  s.min_duration_s = 0.32;
  s.max_duration_s = 0.32;
  s.split_ratios = {1.0, 0.0, 0.0};
  build_dataset(2, {"jumping"}, s, dir.path() / "data", 5);
  DatasetSplits d = DatasetSplits::open(dir.path() / "data", c);
  REQUIRE(d.test.empty());
  const ExperimentResult r = run_experiment(d, c, dir.path() / "runs");
  CHECK_FALSE(r.summary.has_value());
  REQUIRE(r.runs.size() == 1);
  CHECK_FALSE(r.runs[0].test.has_value());
  CHECK(std::filesystem::exists(dir.path() / "runs" / "run_0" / "pose2d.ckpt"));
  CHECK_FALSE(std::filesystem::exists(dir.path() / "runs" / "summary.json"));
  CHECK_THROWS_AS(ablation_suite(d, AblationGrid{}, c, std::nullopt), DataError);
}

TEST_CASE("ablation suite isolates failures and reports model sizes") {
  TrainConfig c = tiny_config();
  c.runs = 2;
  c.epochs = 2;
  DatasetSplits d = open_tiny(c);

  AblationGrid one;
  const auto single = ablation_suite(d, one, c, std::nullopt);
  REQUIRE(single.size() == 1);
  REQUIRE(single[0].result.has_value());
  CHECK(single[0].result->runs.size() == 2);

  AblationGrid grid;
  grid.backbones = {18, 19};
  grid.weight_sharing = {true, false};
  const auto results = ablation_suite(d, grid, c, std::nullopt);
  REQUIRE(results.size() == 4);
  int failed = 0;
  std::size_t shared_enc = 0;
  std::size_t unshared_enc = 0;
  for (const auto& r : results) {
    if (!r.result) {
      ++failed;
      CHECK(r.cell.backbone == 19);
      continue;
    }
    (r.cell.weight_sharing ? shared_enc : unshared_enc) = r.encoder_params;
  }
  CHECK(failed == 2);
  CHECK(unshared_enc == 2 * shared_enc);
  const std::string table = format_ablation_table(results);
  CHECK(table.find("failed") != std::string::npos);
  CHECK(table.find(" (") != std::string::npos);

  grid = AblationGrid{};
  grid.variants = {Variant::kStereoShared, Variant::kStereoDual, Variant::kMonocular};
  grid.weight_sharing = {true, false};
  CHECK(grid.cells().size() == 4);
}
