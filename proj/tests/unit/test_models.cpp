// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uego/core/error.hpp"
#include "uego/model/losses.hpp"
#include "uego/model/pose2d_net.hpp"
#include "uego/model/pose3d_net.hpp"
#include "uego/nn/checkpoint.hpp"
#include "uego/nn/gradcheck.hpp"

using namespace uego;

namespace {

template <typename T>
nn::Tensor<T> random_tensor(int c, int h, int w, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  nn::Tensor<T> t(c, h, w);
  for (T& v : t.data) v = static_cast<T>(n(rng));
  return t;
}

Pose3D random_pose(std::mt19937_64& rng, double extent = 50.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  Pose3D p;
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) p.set_joint(j, {u(rng), u(rng), u(rng)});
  return p;
}

HeatmapStack filled_stack(int size, float value) {
  HeatmapStack h(size);
  for (float& v : h.data()) v = value;
  return h;
}

Pose2DConfig mini_2d(Variant v, bool sharing = true) {
  Pose2DConfig c;
  c.variant = v;
  c.weight_sharing = sharing;
  c.base_width = 2;
  c.encoder_stages = 2;
  c.image_size = 8;
  c.heatmap_size = 2;
  c.zero_init_residual = false;
  c.head_init_std = 0.0;
  return c;
}

Pose3DConfig mini_3d(int views = 2) {
  Pose3DConfig c;
  c.heatmap_size = 8;
  c.views = views;
  c.base_channels = 3;
  c.encoder_stages = 2;
  c.embedding_dim = 16;
  c.pose_hidden = 12;
  c.output_scale_cm = 1.0;
  return c;
}

}  // namespace

TEST_CASE("loss_2d hand cases") {
  std::vector<HeatmapStack> zeros{filled_stack(1, 0.0f)};
  std::vector<HeatmapStack> ones{filled_stack(1, 1.0f)};
  std::vector<HeatmapStack> twos{filled_stack(1, 2.0f)};
  CHECK(loss_2d(ones, ones, ones, ones) == 0.0);
  CHECK(loss_2d(zeros, zeros, ones, ones) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(loss_2d(zeros, zeros, twos, twos) == doctest::Approx(4.0 * loss_2d(zeros, zeros, ones, ones)));
  std::vector<HeatmapStack> big{filled_stack(2, 0.0f)};
  CHECK_THROWS_AS(loss_2d(big, zeros, ones, ones), ArgumentError);
  CHECK_THROWS_AS(loss_2d({}, {}, {}, {}), ArgumentError);
}

TEST_CASE("mpjpe_loss hand cases") {
  std::mt19937_64 rng(1);
  const Pose3D p = random_pose(rng);
  std::vector<Pose3D> truth{p};
  CHECK(mpjpe_loss(truth, truth) == 0.0);
  Pose3D q = p;
  q.set_joint(5, p.joint(5) + Eigen::Vector3d(3, 4, 0));
  std::vector<Pose3D> pred{q};
  CHECK(std::abs(mpjpe_loss(truth, pred) - 0.3125) <= 1e-12);
  CHECK(mpjpe_loss(pred, truth) == mpjpe_loss(truth, pred));
  Pose3D pt = p, qt = q;
  pt.joints.rowwise() += Eigen::RowVector3d(10, -3, 7);
  qt.joints.rowwise() += Eigen::RowVector3d(10, -3, 7);
  CHECK(std::abs(mpjpe_loss(std::vector<Pose3D>{pt}, std::vector<Pose3D>{qt}) - 0.3125) <= 1e-12);
  CHECK_THROWS_AS(mpjpe_loss(truth, std::vector<Pose3D>{}), ArgumentError);
}

TEST_CASE("cos_loss hand cases") {
  std::mt19937_64 rng(2);
  const Pose3D p = random_pose(rng);
  std::vector<Pose3D> truth{p};
  CHECK(std::abs(cos_loss(truth, truth) + 15.0) <= 1e-12);
  Pose3D scaled = p;
  scaled.joints *= 2.0;
  CHECK(std::abs(cos_loss(truth, std::vector<Pose3D>{scaled}) + 15.0) <= 1e-12);
  // ball_r is a leaf: mirroring it through its parent reverses exactly one bone.
  Pose3D reversed = p;
  const int leaf = joint_from_name("ball_r");
  const int parent = build_topology().parent_index[static_cast<std::size_t>(leaf)];
  reversed.set_joint(leaf, 2.0 * p.joint(parent) - p.joint(leaf));
  CHECK(std::abs(cos_loss(truth, std::vector<Pose3D>{reversed}) + 13.0) <= 1e-12);
}

TEST_CASE("cos_loss stays within [-L, L] and is finite at zero-length bones") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const double v = cos_loss(std::vector<Pose3D>{random_pose(rng)}, std::vector<Pose3D>{random_pose(rng)});
    CHECK(v >= -15.0);
    CHECK(v <= 15.0);
    CHECK(v > -15.0);
  }
  const double degenerate = cos_loss(std::vector<Pose3D>{random_pose(rng)}, std::vector<Pose3D>{Pose3D{}});
  CHECK(degenerate == 0.0);
}

TEST_CASE("loss_3d hand cases and decomposition") {
  std::mt19937_64 rng(4);
  const std::vector<Pose3D> p{random_pose(rng)};
  HeatmapStack h(4);
  for (float& v : h.data()) v = static_cast<float>(std::uniform_real_distribution<double>(0, 1)(rng));
  const std::vector<HeatmapStack> hs{h};
  CHECK(std::abs(loss_3d(p, p, hs, hs, hs, hs) - (-0.015)) <= 1e-15);

  HeatmapStack shifted = h;
  for (float& v : shifted.data()) v += 1.0f;
  const std::vector<HeatmapStack> recon{shifted};
  CHECK(std::abs(loss_3d(p, p, hs, hs, recon, recon) - (-0.013)) <= 1e-9);

  const std::vector<Pose3D> q{random_pose(rng)};
  LossWeights no_hm;
  no_hm.hm = 0.0;
  const double pose_only = 0.1 * (mpjpe_loss(p, q) + 0.01 * cos_loss(p, q));
  CHECK(std::abs(loss_3d(p, q, hs, hs, recon, recon, no_hm) - pose_only) <= 1e-12);
  const double full = pose_only + 0.001 * (heatmap_mse(h, shifted) + heatmap_mse(h, shifted));
  CHECK(std::abs(loss_3d(p, q, hs, hs, recon, recon) - full) <= 1e-12);
}

TEST_CASE("per-sample loss gradients match finite differences") {
  std::mt19937_64 rng(5);
  const PoseMatrix<double> truth = from_pose<double>(random_pose(rng));
  PoseMatrix<double> pred = from_pose<double>(random_pose(rng));
  PoseMatrix<double> g_mpjpe, g_cos;
  mpjpe_sample(truth, pred, &g_mpjpe);
  cos_sample(truth, pred, &g_cos);
  for (int j = 0; j < 16; ++j) {
    for (int k = 0; k < 3; ++k) {
      PoseMatrix<double> up = pred, down = pred;
      up(j, k) += 1e-6;
      down(j, k) -= 1e-6;
      const double n1 = (mpjpe_sample<double>(truth, up, nullptr) - mpjpe_sample<double>(truth, down, nullptr)) / 2e-6;
      const double n2 = (cos_sample<double>(truth, up, nullptr) - cos_sample<double>(truth, down, nullptr)) / 2e-6;
      CHECK(nn::relative_error(g_mpjpe(j, k), n1, 1e-9) < 1e-5);
      CHECK(nn::relative_error(g_cos(j, k), n2, 1e-9) < 1e-5);
    }
  }
}

TEST_CASE("pose2d output shapes and parameter counts") {
  Pose2DConfig shared;
  Pose2DConfig mono;
  mono.variant = Variant::kMonocular;
  Pose2DConfig dual;
  dual.variant = Variant::kStereoDual;
  Pose2DConfig separate;
  separate.weight_sharing = false;
  Pose2DNet<float> net(shared, 1);
  Pose2DNet<float> mono_net(mono, 1);
  Pose2DNet<float> dual_net(dual, 1);
  Pose2DNet<float> separate_net(separate, 1);

  nn::NoGradGuard guard;
  const nn::Tensor<float> img(3, 256, 256, 0.1f);
  const Pose2DOutput<float> out = net.forward(img, img);
  CHECK(out.left.c == 15);
  CHECK(out.left.h == 64);
  CHECK(out.left.w == 64);
  CHECK(out.right.c == 15);
  CHECK(out.right.h == 64);

  CHECK(net.shares_encoder());
  CHECK_FALSE(separate_net.shares_encoder());
  const std::size_t enc = net.encoder_parameters().scalar_count();
  CHECK(enc == mono_net.encoder_parameters().scalar_count());
  CHECK(dual_net.encoder_parameters().scalar_count() == 2 * enc);
  CHECK(separate_net.encoder_parameters().scalar_count() == 2 * enc);
  CHECK(dual_net.parameters().scalar_count() == 2 * mono_net.parameters().scalar_count());

  CHECK_THROWS_AS(net.forward(nn::Tensor<float>(3, 128, 128), img), ArgumentError);
  CHECK_THROWS_AS(net.forward(img, nn::Tensor<float>(1, 256, 256)), ArgumentError);
}

TEST_CASE("pose2d stereo-shared with identical views yields identical feature pairs") {
  std::mt19937_64 rng(6);
  Pose2DConfig c = mini_2d(Variant::kStereoShared);
  c.image_size = 32;
  c.heatmap_size = 8;
  c.encoder_stages = 4;
  c.zero_init_residual = true;
  Pose2DNet<float> net(c, 3);
  nn::NoGradGuard guard;
  const nn::Tensor<float> img = random_tensor<float>(3, 32, 32, rng);
  const Pose2DOutput<float> out = net.forward(img, img);
  REQUIRE(out.left_features.size() == out.right_features.size());
  for (std::size_t s = 0; s < out.left_features.size(); ++s) {
    CHECK(out.left_features[s].data == out.right_features[s].data);
  }
}

TEST_CASE("pose2d loss gradients on miniature configs for every variant") {
  struct Case {
    Variant variant;
    bool sharing;
  };
  for (const Case& cs : {Case{Variant::kStereoShared, true}, Case{Variant::kStereoShared, false},
                         Case{Variant::kStereoDual, true}, Case{Variant::kMonocular, true}}) {
    CAPTURE(to_string(cs.variant));
    CAPTURE(cs.sharing);
    std::mt19937_64 rng(7);
    Pose2DNet<double> net(mini_2d(cs.variant, cs.sharing), 11);
    const auto left = random_tensor<double>(3, 8, 8, rng);
    const auto right = random_tensor<double>(3, 8, 8, rng);
    const auto tl = random_tensor<double>(15, 2, 2, rng);
    const auto tr = cs.variant == Variant::kMonocular ? nn::Tensor<double>() : random_tensor<double>(15, 2, 2, rng);
    nn::ParameterList<double> params = net.parameters();
    auto evaluate = [&](bool with_grad) {
      std::optional<nn::NoGradGuard> guard;
      if (!with_grad) guard.emplace();
      const Pose2DOutput<double> out = net.forward(left, right);
      nn::Tensor<double> gl, gr;
      const double loss = loss_2d_sample(out.left, out.right, tl, tr, with_grad ? &gl : nullptr,
                                         with_grad ? &gr : nullptr);
      if (with_grad) net.backward(gl, gr);
      return loss;
    };
    const nn::GradCheckResult res = nn::check_gradients(params, evaluate, rng, {.probes = 100});
    INFO("worst " << res.worst_parameter << " err " << res.max_relative_error << " a " << res.worst_analytic << " n " << res.worst_numeric);
    CHECK(res.ok());
  }
}

TEST_CASE("pose2d initialisation and first loss are deterministic") {
  const Pose2DConfig c = mini_2d(Variant::kStereoShared);
  Pose2DNet<float> a(c, 5);
  Pose2DNet<float> b(c, 5);
  Pose2DNet<float> other(c, 6);
  CHECK(nn::parameter_checksum(a.parameters()) == nn::parameter_checksum(b.parameters()));
  CHECK(nn::parameter_checksum(a.parameters()) != nn::parameter_checksum(other.parameters()));
  std::mt19937_64 rng(8);
  const auto img = random_tensor<float>(3, 8, 8, rng);
  const auto t = random_tensor<float>(15, 2, 2, rng);
  nn::NoGradGuard guard;
  const auto oa = a.forward(img, img);
  const auto ob = b.forward(img, img);
  const float la = loss_2d_sample<float>(oa.left, oa.right, t, t, nullptr, nullptr);
  CHECK(la == loss_2d_sample<float>(ob.left, ob.right, t, t, nullptr, nullptr));
  CHECK(std::isfinite(la));
  CHECK(la > 0.0f);
}

TEST_CASE("pose2d config validation and json round trip") {
  Pose2DConfig c;
  c.heatmap_size = 32;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = Pose2DConfig{};
  c.backbone_depth = 21;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  CHECK_THROWS_AS(parse_variant("stereo"), ArgumentError);
  c = Pose2DConfig{};
  c.variant = Variant::kStereoDual;
  c.backbone_depth = 50;
  c.weight_sharing = false;
  const Pose2DConfig back = pose2d_config_from_json(to_json_value(c));
  CHECK(back.variant == Variant::kStereoDual);
  CHECK(back.backbone_depth == 50);
  CHECK_FALSE(back.weight_sharing);
}

TEST_CASE("image conversion normalises and resizes") {
  RgbImage img(8, 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      img.at(x, y)[0] = 255;
      img.at(x, y)[1] = 0;
      img.at(x, y)[2] = static_cast<std::uint8_t>(x < 4 ? 0 : 200);
    }
  }
  Pose2DConfig c;
  const auto t = image_to_tensor<float>(img, c);
  CHECK(t.at(0, 0, 0) == doctest::Approx((1.0 - 0.485) / 0.229));
  CHECK(t.at(1, 0, 0) == doctest::Approx(-0.456 / 0.224));
  const RgbImage small = resize_image(img, 2);
  CHECK(small.at(0, 0)[2] == 0);
  CHECK(small.at(1, 0)[2] == 200);
  CHECK(resize_image(img, 3).width == 3);
}

TEST_CASE("pose3d output shapes, zero input and views") {
  Pose3DNet<float> net(Pose3DConfig{}, 1);
  nn::NoGradGuard guard;
  const nn::Tensor<float> zeros(15, 64, 64);
  const Pose3DOutput<float> out = net.forward(zeros, zeros);
  CHECK(out.pose.rows() == 16);
  CHECK(out.pose.cols() == 3);
  CHECK(out.recon_left.same_shape(zeros));
  CHECK(out.recon_right.same_shape(zeros));
  CHECK(out.pose.allFinite());
  for (float v : out.recon_left.data) CHECK(std::isfinite(v));
  CHECK_THROWS_AS(net.forward(nn::Tensor<float>(15, 32, 32), zeros), ArgumentError);

  Pose3DConfig mono;
  mono.views = 1;
  Pose3DNet<float> mono_net(mono, 1);
  const Pose3DOutput<float> m = mono_net.forward(zeros, nn::Tensor<float>());
  CHECK(m.recon_left.same_shape(zeros));
  CHECK(m.recon_right.size() == 0);
}

TEST_CASE("pose3d gradients on a miniature config for each loss branch") {
  struct Branch {
    std::string name;
    LossWeights weights;
    double step;
  };
  for (int views : {2, 1}) {
    for (const Branch& br : {Branch{"pose", {0.1, 0.01, 0.0}, 1e-6}, Branch{"heatmap", {0.0, 0.01, 1.0}, 1e-6},
                             Branch{"both", {0.1, 0.01, 0.001}, 1e-4}}) {
      CAPTURE(views);
      INFO("branch " << br.name);
      std::mt19937_64 rng(9);
      Pose3DNet<double> net(mini_3d(views), 12);
      const auto hl = random_tensor<double>(15, 8, 8, rng, 0.5);
      const auto hr = views == 2 ? random_tensor<double>(15, 8, 8, rng, 0.5) : nn::Tensor<double>();
      const PoseMatrix<double> truth = from_pose<double>(random_pose(rng, 1.0));
      nn::ParameterList<double> params = net.parameters();
      std::pair<nn::Tensor<double>, nn::Tensor<double>> input_grads;
      Loss3DGrads<double> g;
      auto evaluate = [&](bool with_grad) {
        std::optional<nn::NoGradGuard> guard;
        if (!with_grad) guard.emplace();
        const Pose3DOutput<double> out = net.forward(hl, hr);
        const Loss3DTerms terms = loss_3d_sample(truth, out.pose, hl, hr, out.recon_left, out.recon_right,
                                                 br.weights, with_grad ? &g : nullptr);
        if (with_grad) input_grads = net.backward(g.pose, g.recon_left, g.recon_right);
        return terms.total;
      };
      const nn::GradCheckResult res =
          nn::check_gradients(params, evaluate, rng, {.probes = 100, .step = br.step});
      INFO("worst " << res.worst_parameter << " err " << res.max_relative_error << " a " << res.worst_analytic << " n " << res.worst_numeric);
      CHECK(res.ok());

      // Input gradient: through the network plus the reconstruction target.
      evaluate(true);
      nn::Tensor<double> total_left = input_grads.first;
      nn::add_inplace(total_left, g.target_left);
      auto loss_at = [&](const nn::Tensor<double>& left) {
        nn::NoGradGuard guard;
        const Pose3DOutput<double> out = net.forward(left, hr);
        return loss_3d_sample(truth, out.pose, left, hr, out.recon_left, out.recon_right, br.weights,
                              static_cast<Loss3DGrads<double>*>(nullptr))
            .total;
      };
      int failures = 0;
      for (std::size_t i = 0; i < hl.size(); i += 37) {
        nn::Tensor<double> up = hl, down = hl;
        up.data[i] += 1e-6;
        down.data[i] -= 1e-6;
        const double numeric = (loss_at(up) - loss_at(down)) / 2e-6;
        if (nn::relative_error(total_left.data[i], numeric, 1e-9) > 1e-4) ++failures;
      }
      CHECK(failures == 0);
    }
  }
}

TEST_CASE("pose3d config validation and json round trip") {
  Pose3DConfig c;
  c.heatmap_size = 60;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = Pose3DConfig{};
  c.views = 3;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  c = Pose3DConfig{};
  c.embedding_dim = 64;
  c.weights.hm = 0.5;
  const Pose3DConfig back = pose3d_config_from_json(to_json_value(c));
  CHECK(back.embedding_dim == 64);
  CHECK(back.weights.hm == 0.5);
  CHECK(back.weights.pose == 0.1);
  CHECK(back.weights.cos == 0.01);
}
