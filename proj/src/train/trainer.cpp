// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "uego/camera/heatmaps.hpp"
#include "uego/core/error.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/json_io.hpp"
#include "uego/nn/checkpoint.hpp"

namespace uego {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kWithinCells = 2.0;

std::uint64_t derive(std::string_view tag, std::uint64_t seed) { return fnv1a64(tag, seed); }

std::string checksum_of(const nn::ParameterList<float>& p) { return to_hex(nn::parameter_checksum(p)); }

bool stereo(const TrainConfig& c) { return c.pose2d.views() == 2; }

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// Runs `per_sample` over shuffled mini-batches, stepping Adam after each.
template <typename Fn>
void run_epoch(std::size_t n, int batch_size, std::mt19937_64& rng, nn::ParameterList<float>& params,
               nn::Adam<float>& adam, double lr, Fn&& per_sample) {
  const std::vector<std::size_t> order = shuffled(n, rng);
  for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
    const std::size_t end = std::min(n, start + static_cast<std::size_t>(batch_size));
    params.zero_grad();
    for (std::size_t k = start; k < end; ++k) per_sample(order[k]);
    params.scale_grad(1.0f / static_cast<float>(end - start));
    adam.step(lr);
  }
}

void report(const ProgressFn& progress, const std::string& phase, const EpochLog& e) {
  if (!progress) return;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s epoch %d lr %.2e loss %.6f (2d %.6f, 3d %.6f) val 2d %.6f val 3d %.6f",
                phase.c_str(), e.epoch + 1, e.lr, e.train_loss, e.train_loss_2d, e.train_loss_3d, e.val_loss_2d,
                e.val_loss_3d);
  progress(buf);
}

struct HeatmapPair {
  nn::Tensor<float> left, right;
};

HeatmapPair predict_heatmaps(Pose2DNet<float>& net, const TrainingSample& s) {
  nn::NoGradGuard guard;
  Pose2DOutput<float> out = net.forward(s.left, s.right);
  return {std::move(out.left), std::move(out.right)};
}

/// Losses of both modules on a split without touching gradients.
std::pair<double, double> validation_losses(PoseModel& model, const FrameDataset* val, const TrainConfig& config) {
  if (!val || val->empty()) return {kNaN, kNaN};
  nn::NoGradGuard guard;
  double l2 = 0.0;
  double l3 = 0.0;
  for (std::size_t i = 0; i < val->size(); ++i) {
    const TrainingSample s = val->sample(i);
    const Pose2DOutput<float> out = model.net2d->forward(s.left, s.right);
    const nn::Tensor<float> empty;
    l2 += loss_2d_sample<float>(out.left, out.right, s.heatmaps_left, stereo(config) ? s.heatmaps_right : empty,
                                nullptr, nullptr);
    const Pose3DOutput<float> o3 = model.net3d->forward(out.left, out.right);
    l3 += loss_3d_sample<float>(s.pose, o3.pose, out.left, out.right, o3.recon_left, o3.recon_right,
                                config.pose3d.weights, nullptr)
              .total;
  }
  return {l2 / static_cast<double>(val->size()), l3 / static_cast<double>(val->size())};
}

nlohmann::json epoch_json(const EpochLog& e) {
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return {{"epoch", e.epoch},         {"lr", e.lr},
          {"train_loss", e.train_loss}, {"train_loss_2d", e.train_loss_2d},
          {"train_loss_3d", e.train_loss_3d}, {"val_loss_2d", num(e.val_loss_2d)},
          {"val_loss_3d", num(e.val_loss_3d)}, {"checksum_2d", e.checksum_2d}};
}

void fill_common(RunReport& r, const PoseModel& model, const TrainConfig& config, std::uint64_t seed) {
  r.strategy = std::string(to_string(config.strategy));
  r.seed = seed;
  r.config_hash = config_hash(config);
  r.params_2d = model.net2d->parameters().scalar_count();
  r.params_3d = model.net3d->parameters().scalar_count();
  r.encoder_params = model.net2d->encoder_parameters().scalar_count();
  r.checksum_2d = checksum_of(model.net2d->parameters());
  r.checksum_3d = checksum_of(model.net3d->parameters());
}

void require_training_data(const FrameDataset& train) {
  if (train.empty()) throw DataError("training split has no frames");
}

}  // namespace

PoseModel PoseModel::create(const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  PoseModel m;
  m.net2d = std::make_unique<Pose2DNet<float>>(config.pose2d, derive("pose2d", seed));
  m.net3d = std::make_unique<Pose3DNet<float>>(config.pose3d, derive("pose3d", seed));
  return m;
}

nn::ParameterList<float> PoseModel::parameters() const {
  nn::ParameterList<float> p = net2d->parameters();
  p.append(net3d->parameters());
  return p;
}

template <typename T>
double accumulate_2d(Pose2DNet<T>& net, const nn::Tensor<T>& left, const nn::Tensor<T>& right,
                     const nn::Tensor<T>& truth_left, const nn::Tensor<T>& truth_right) {
  const Pose2DOutput<T> out = net.forward(left, right);
  nn::Tensor<T> gl, gr;
  const nn::Tensor<T> empty;
  const bool two = net.config().views() == 2;
  const T loss = loss_2d_sample(out.left, out.right, truth_left, two ? truth_right : empty, &gl, &gr);
  net.backward(gl, gr);
  return static_cast<double>(loss);
}

template <typename T>
Loss3DTerms accumulate_3d(Pose3DNet<T>& net, const nn::Tensor<T>& heatmaps_left, const nn::Tensor<T>& heatmaps_right,
                          const PoseMatrix<T>& truth) {
  const Pose3DOutput<T> out = net.forward(heatmaps_left, heatmaps_right);
  Loss3DGrads<T> g;
  const nn::Tensor<T> empty;
  const bool two = net.config().views == 2;
  const Loss3DTerms terms = loss_3d_sample(truth, out.pose, heatmaps_left, two ? heatmaps_right : empty,
                                           out.recon_left, out.recon_right, net.config().weights, &g);
  net.backward(g.pose, g.recon_left, g.recon_right);
  return terms;
}

template <typename T>
JointLoss accumulate_end2end(Pose2DNet<T>& net2d, Pose3DNet<T>& net3d, const nn::Tensor<T>& left,
                             const nn::Tensor<T>& right, const nn::Tensor<T>& truth_left,
                             const nn::Tensor<T>& truth_right, const PoseMatrix<T>& truth, double weight_3d) {
  const bool two = net2d.config().views() == 2;
  const nn::Tensor<T> empty;
  const Pose2DOutput<T> out = net2d.forward(left, right);
  nn::Tensor<T> gl, gr;
  JointLoss result;
  result.loss_2d = static_cast<double>(
      loss_2d_sample(out.left, out.right, truth_left, two ? truth_right : empty, &gl, &gr));

  const Pose3DOutput<T> o3 = net3d.forward(out.left, out.right);
  Loss3DGrads<T> g3;
  result.loss_3d = loss_3d_sample(truth, o3.pose, out.left, two ? out.right : empty, o3.recon_left, o3.recon_right,
                                  net3d.config().weights, &g3);
  result.total = result.loss_2d + weight_3d * result.loss_3d.total;

  const T w = static_cast<T>(weight_3d);
  g3.pose *= w;
  g3.recon_left.vec() *= w;
  if (two) g3.recon_right.vec() *= w;
  auto [in_left, in_right] = net3d.backward(g3.pose, g3.recon_left, g3.recon_right);
  if (weight_3d != 0.0) {
    gl.vec() += w * (in_left.vec() + g3.target_left.vec());
    if (two) gr.vec() += w * (in_right.vec() + g3.target_right.vec());
  }
  net2d.backward(gl, gr);
  return result;
}

RunReport train_separate(PoseModel& model, const FrameDataset& train, const FrameDataset* val,
                         const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress) {
  require_training_data(train);
  const auto started = std::chrono::steady_clock::now();
  RunReport r;
  std::mt19937_64 rng(derive("shuffle", seed));
  const bool two = stereo(config);

  // Phase 1: the 2D module alone.
  nn::ParameterList<float> params2d = model.net2d->parameters();
  nn::Adam<float> adam2d(params2d, config.adam);
  for (int e = 0; e < config.epochs; ++e) {
    EpochLog log;
    log.epoch = e;
    log.lr = epoch_lr(e, config);
    double sum = 0.0;
    run_epoch(train.size(), config.batch_size, rng, params2d, adam2d, log.lr, [&](std::size_t i) {
      const TrainingSample s = train.sample(i);
      sum += accumulate_2d(*model.net2d, s.left, s.right, s.heatmaps_left, s.heatmaps_right);
    });
    log.train_loss = log.train_loss_2d = sum / static_cast<double>(train.size());
    log.train_loss_3d = kNaN;
    std::tie(log.val_loss_2d, log.val_loss_3d) = validation_losses(model, val, config);
    log.val_loss_3d = kNaN;
    log.checksum_2d = checksum_of(params2d);
    report(progress, "2d", log);
    r.phase1.push_back(log);
  }

  // Phase 2: the 2D module is frozen; only the 3D module's optimizer exists.
  const std::string frozen = checksum_of(params2d);
  std::vector<std::shared_ptr<HeatmapPair>> inputs(train.size());
  const std::size_t pair_bytes = 2ULL * kHeatmapJointCount * config.pose2d.heatmap_size * config.pose2d.heatmap_size *
                                 sizeof(float);
  const std::size_t cache_cap = static_cast<std::size_t>(config.cache_mb) * (1ULL << 20) / pair_bytes;
  auto input_for = [&](std::size_t i, const TrainingSample& s) -> HeatmapPair {
    if (inputs[i]) return *inputs[i];
    HeatmapPair h = config.gt_heatmaps_for_3d ? HeatmapPair{s.heatmaps_left, s.heatmaps_right}
                                              : predict_heatmaps(*model.net2d, s);
    if (i < cache_cap) inputs[i] = std::make_shared<HeatmapPair>(h);
    return h;
  };
  nn::ParameterList<float> params3d = model.net3d->parameters();
  nn::Adam<float> adam3d(params3d, config.adam);
  r.frozen_2d_verified = true;
  for (int e = 0; e < config.epochs; ++e) {
    EpochLog log;
    log.epoch = e;
    log.lr = epoch_lr(e, config);
    double sum = 0.0;
    run_epoch(train.size(), config.batch_size, rng, params3d, adam3d, log.lr, [&](std::size_t i) {
      const TrainingSample s = train.sample(i);
      const HeatmapPair h = input_for(i, s);
      sum += accumulate_3d(*model.net3d, h.left, two ? h.right : nn::Tensor<float>(), s.pose).total;
    });
    log.train_loss = log.train_loss_3d = sum / static_cast<double>(train.size());
    log.train_loss_2d = kNaN;
    std::tie(log.val_loss_2d, log.val_loss_3d) = validation_losses(model, val, config);
    log.checksum_2d = checksum_of(params2d);
    if (log.checksum_2d != frozen) r.frozen_2d_verified = false;
    report(progress, "3d", log);
    r.phase2.push_back(log);
  }
  if (!r.frozen_2d_verified) throw std::logic_error("2D parameters changed while frozen");

  fill_common(r, model, config, seed);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

RunReport train_end2end(PoseModel& model, const FrameDataset& train, const FrameDataset* val,
                        const TrainConfig& config, std::uint64_t seed, const ProgressFn& progress) {
  require_training_data(train);
  const auto started = std::chrono::steady_clock::now();
  RunReport r;
  std::mt19937_64 rng(derive("shuffle", seed));
  nn::ParameterList<float> params = model.parameters();
  nn::Adam<float> adam(params, config.adam);
  for (int e = 0; e < config.epochs; ++e) {
    EpochLog log;
    log.epoch = e;
    log.lr = epoch_lr(e, config);
    double s2 = 0.0;
    double s3 = 0.0;
    double total = 0.0;
    run_epoch(train.size(), config.batch_size, rng, params, adam, log.lr, [&](std::size_t i) {
      const TrainingSample s = train.sample(i);
      const JointLoss l = accumulate_end2end(*model.net2d, *model.net3d, s.left, s.right, s.heatmaps_left,
                                             s.heatmaps_right, s.pose, config.loss3d_weight);
      s2 += l.loss_2d;
      s3 += l.loss_3d.total;
      total += l.total;
    });
    const double n = static_cast<double>(train.size());
    log.train_loss = total / n;
    log.train_loss_2d = s2 / n;
    log.train_loss_3d = s3 / n;
    std::tie(log.val_loss_2d, log.val_loss_3d) = validation_losses(model, val, config);
    log.checksum_2d = checksum_of(model.net2d->parameters());
    report(progress, "end2end", log);
    r.phase1.push_back(log);
  }
  fill_common(r, model, config, seed);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

RunReport train_run(PoseModel& model, const FrameDataset& train, const FrameDataset* val, const TrainConfig& config,
                    std::uint64_t seed, const ProgressFn& progress) {
  return config.strategy == Strategy::kSeparate ? train_separate(model, train, val, config, seed, progress)
                                                : train_end2end(model, train, val, config, seed, progress);
}

EvalOutput evaluate_model(PoseModel& model, const FrameDataset& data, const TrainConfig& config) {
  if (data.empty()) throw DataError("evaluation split has no frames");
  nn::NoGradGuard guard;
  EvalOutput out;
  std::vector<FrameError> frames;
  const double cell = static_cast<double>(config.pose2d.image_size) / config.pose2d.heatmap_size;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const TrainingSample s = data.sample(i);
    const Pose2DOutput<float> o2 = model.net2d->forward(s.left, s.right);
    for (int view = 0; view < config.pose2d.views(); ++view) {
      const Keypoints2D truth = data.scaled_keypoints(i, view == 1);
      const Keypoints2D decoded = decode_heatmaps(to_heatmap_stack(view == 1 ? o2.right : o2.left),
                                                  config.pose2d.image_size);
      for (std::size_t j = 0; j < kHeatmapJointCount; ++j) {
        if (!truth.points[j].visible) continue;
        ++out.visible_joints;
        const double du = decoded.points[j].u - truth.points[j].u;
        const double dv = decoded.points[j].v - truth.points[j].v;
        if (decoded.points[j].visible && std::hypot(du, dv) <= kWithinCells * cell) ++out.within_two_cells;
      }
    }
    const Pose3DOutput<float> o3 = model.net3d->forward(o2.left, o2.right);
    const Pose3D pred = to_pose(o3.pose, PoseFrame::kDevice);
    const Pose3D& truth = data.record(i).joints_device;
    frames.push_back({data.record(i).motion_category, mpjpe(truth, pred), pa_mpjpe(truth, pred)});
    out.predictions.push_back(pred);
  }
  out.report = aggregate(frames, "device");
  return out;
}

nlohmann::json to_json_value(const RunReport& r) {
  nlohmann::json p1 = nlohmann::json::array();
  nlohmann::json p2 = nlohmann::json::array();
  for (const auto& e : r.phase1) p1.push_back(epoch_json(e));
  for (const auto& e : r.phase2) p2.push_back(epoch_json(e));
  nlohmann::json j = {{"strategy", r.strategy},
                      {"seed", r.seed},
                      {"config_hash", r.config_hash},
                      {"phase1", p1},
                      {"phase2", p2},
                      {"frozen_2d_verified", r.frozen_2d_verified},
                      {"checksum_2d", r.checksum_2d},
                      {"checksum_3d", r.checksum_3d},
                      {"params_2d", r.params_2d},
                      {"params_3d", r.params_3d},
                      {"encoder_params", r.encoder_params}};
  if (r.test) j["test"] = to_json_value(*r.test);
  return j;
}

std::string pose2d_hash(const Pose2DConfig& config) {
  nlohmann::json j = to_json_value(config);
  // Initialisation sources do not change the network's shape.
  j.erase("pretrained_encoder");
  j.erase("zero_init_residual");
  j.erase("head_init_std");
  return json_hash(j);
}

std::string pose3d_hash(const Pose3DConfig& config) { return json_hash(to_json_value(config)); }

std::vector<std::filesystem::path> save_model(const PoseModel& model, const TrainConfig& config,
                                              const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  const std::uint64_t topo = build_topology().checksum();
  std::vector<std::filesystem::path> written;
  if (config.strategy == Strategy::kSeparate) {
    nn::Checkpoint c2{"pose2d", pose2d_hash(config.pose2d), topo, {}};
    nn::export_parameters(model.net2d->parameters(), c2);
    nn::Checkpoint c3{"pose3d", pose3d_hash(config.pose3d), topo, {}};
    nn::export_parameters(model.net3d->parameters(), c3);
    written.push_back(dir / "pose2d.ckpt");
    nn::save_checkpoint(c2, written.back());
    written.push_back(dir / "pose3d.ckpt");
    nn::save_checkpoint(c3, written.back());
  } else {
    nn::Checkpoint c{"end2end", json_hash({pose2d_hash(config.pose2d), pose3d_hash(config.pose3d)}), topo, {}};
    nn::export_parameters(model.net2d->parameters(), c, "2d.");
    nn::export_parameters(model.net3d->parameters(), c, "3d.");
    written.push_back(dir / "model.ckpt");
    nn::save_checkpoint(c, written.back());
  }
  return written;
}

PoseModel load_model(const TrainConfig& config, const std::filesystem::path& dir) {
  PoseModel m = PoseModel::create(config, 0);
  nn::ParameterList<float> p2 = m.net2d->parameters();
  nn::ParameterList<float> p3 = m.net3d->parameters();
  if (std::filesystem::exists(dir / "model.ckpt")) {
    const nn::Checkpoint c = nn::load_checkpoint(dir / "model.ckpt");
    nn::verify_checkpoint(c, "end2end", json_hash({pose2d_hash(config.pose2d), pose3d_hash(config.pose3d)}));
    nn::import_parameters(p2, c, "2d.");
    nn::import_parameters(p3, c, "3d.");
    return m;
  }
  if (!std::filesystem::exists(dir / "pose2d.ckpt") || !std::filesystem::exists(dir / "pose3d.ckpt")) {
    throw DataError("no checkpoint found in " + dir.string() + " (expected model.ckpt or pose2d.ckpt + pose3d.ckpt)");
  }
  const nn::Checkpoint c2 = nn::load_checkpoint(dir / "pose2d.ckpt");
  nn::verify_checkpoint(c2, "pose2d", pose2d_hash(config.pose2d));
  nn::import_parameters(p2, c2);
  const nn::Checkpoint c3 = nn::load_checkpoint(dir / "pose3d.ckpt");
  nn::verify_checkpoint(c3, "pose3d", pose3d_hash(config.pose3d));
  nn::import_parameters(p3, c3);
  return m;
}

template double accumulate_2d(Pose2DNet<float>&, const nn::Tensor<float>&, const nn::Tensor<float>&,
                              const nn::Tensor<float>&, const nn::Tensor<float>&);
template double accumulate_2d(Pose2DNet<double>&, const nn::Tensor<double>&, const nn::Tensor<double>&,
                              const nn::Tensor<double>&, const nn::Tensor<double>&);
template Loss3DTerms accumulate_3d(Pose3DNet<float>&, const nn::Tensor<float>&, const nn::Tensor<float>&,
                                   const PoseMatrix<float>&);
template Loss3DTerms accumulate_3d(Pose3DNet<double>&, const nn::Tensor<double>&, const nn::Tensor<double>&,
                                   const PoseMatrix<double>&);
template JointLoss accumulate_end2end(Pose2DNet<float>&, Pose3DNet<float>&, const nn::Tensor<float>&,
                                      const nn::Tensor<float>&, const nn::Tensor<float>&, const nn::Tensor<float>&,
                                      const PoseMatrix<float>&, double);
template JointLoss accumulate_end2end(Pose2DNet<double>&, Pose3DNet<double>&, const nn::Tensor<double>&,
                                      const nn::Tensor<double>&, const nn::Tensor<double>&,
                                      const nn::Tensor<double>&, const PoseMatrix<double>&, double);

}  // namespace uego
