// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "uego/camera/fisheye.hpp"
#include "uego/camera/heatmaps.hpp"
#include "uego/core/error.hpp"
#include "uego/core/validation.hpp"
#include "uego/synth/renderer.hpp"

using namespace uego;

namespace {

Eigen::Vector3d direction(double theta, double azimuth) {
  return {std::sin(theta) * std::cos(azimuth), std::sin(theta) * std::sin(azimuth), std::cos(theta)};
}

}  // namespace

TEST_CASE("point on the optical axis lands on the image center") {
  FisheyeIntrinsics intr;
  for (double depth : {0.1, 1.0, 250.0}) {
    const Projection p = project({0, 0, depth}, intr);
    CHECK(p.u == doctest::Approx(128.0));
    CHECK(p.v == doctest::Approx(128.0));
    CHECK(p.visible);
  }
}

TEST_CASE("point at half the field of view lands on the inscribed circle") {
  FisheyeIntrinsics intr;
  const Projection p = project(direction(intr.fov / 2, 0.0) * 40.0, intr);
  CHECK(p.u == doctest::Approx(128.0 + 128.0).epsilon(1e-12));
  CHECK(p.v == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(p.visible);
  CHECK_FALSE(project(direction(intr.fov / 2 + 0.1, 0.0), intr).visible);
  CHECK_THROWS_AS(project(Eigen::Vector3d::Zero(), intr), DomainError);
}

TEST_CASE("image radius grows strictly with the off-axis angle") {
  FisheyeIntrinsics intr;
  double last = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double theta = intr.fov / 2 * i / 100.0;
    const Projection p = project(direction(theta, 0.7), intr);
    const double r = std::hypot(p.u - 128.0, p.v - 128.0);
    CHECK(r > last);
    last = r;
  }
}

TEST_CASE("rotation about the optical axis rotates the image") {
  FisheyeIntrinsics intr;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> th(0.0, intr.fov / 2), az(-M_PI, M_PI), d(1.0, 300.0);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d p = direction(th(rng), az(rng)) * d(rng);
    const double phi = az(rng);
    const Eigen::Vector3d q = Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitZ()) * p;
    const Projection a = project(p, intr);
    const Projection b = project(q, intr);
    const Eigen::Vector2d ra = Eigen::Rotation2Dd(phi) * Eigen::Vector2d(a.u - 128.0, a.v - 128.0);
    CHECK((ra - Eigen::Vector2d(b.u - 128.0, b.v - 128.0)).norm() <= 1e-9 * std::max(1.0, ra.norm()));
  }
}

TEST_CASE("rig camera centers sit one baseline apart") {
  for (double b : {6.0, 12.0, 20.5}) {
    RigConfig c;
    c.baseline_cm = b;
    const StereoRig rig(c);
    CHECK((rig.camera_center(View::kLeft) - rig.camera_center(View::kRight)).norm() ==
          doctest::Approx(b).epsilon(1e-15));
    CHECK(rig.camera_center(View::kLeft).x() < 0.0);
  }
  RigConfig bad;
  bad.baseline_cm = 0.0;
  CHECK_THROWS_AS(StereoRig{bad}, ArgumentError);
}

TEST_CASE("point on the mid-plane projects symmetrically") {
  const StereoRig rig;
  Pose3D pose(PoseFrame::kDevice);
  for (int j = 0; j < 16; ++j) pose.set_joint(j, {0.0, 20.0 + j, 40.0 + 3 * j});
  const StereoKeypoints k = project_pose(pose, rig);
  for (int i = 0; i < 15; ++i) {
    CHECK(k.left.points[i].u - 128.0 == doctest::Approx(-(k.right.points[i].u - 128.0)));
    CHECK(k.left.points[i].v == doctest::Approx(k.right.points[i].v));
  }
}

TEST_CASE("joint behind both cameras is invisible in both views") {
  const StereoRig rig;
  Pose3D pose(PoseFrame::kDevice);
  for (int j = 0; j < 16; ++j) pose.set_joint(j, {0.0, 40.0, 60.0});
  pose.set_joint(index_of(Joint::kHandL), {0.0, -60.0, -50.0});
  const int ch = build_topology().heatmap_channel(index_of(Joint::kHandL));
  const StereoKeypoints k = project_pose(pose, rig);
  CHECK_FALSE(k.left.points[ch].visible);
  CHECK_FALSE(k.right.points[ch].visible);
  CHECK(k.left.points[0].visible);
}

TEST_CASE("translating along the baseline shifts both views the same way") {
  const StereoRig rig;
  Pose3D pose(PoseFrame::kDevice);
  for (int j = 0; j < 16; ++j) pose.set_joint(j, {-10.0 + j, 30.0, 50.0});
  Pose3D moved = pose;
  moved.joints.col(0).array() += 1.0;
  const StereoKeypoints a = project_pose(pose, rig);
  const StereoKeypoints b = project_pose(moved, rig);
  for (int i = 0; i < 15; ++i) {
    CHECK(b.left.points[i].u > a.left.points[i].u);
    CHECK(b.right.points[i].u > a.right.points[i].u);
  }
  CHECK_THROWS_AS(project_pose(Pose3D(PoseFrame::kWorld), rig), ArgumentError);
}

TEST_CASE("heatmap values") {
  Keypoints2D k;
  k.points[0] = Keypoint{(10 + 0.5) * 4.0, (20 + 0.5) * 4.0, true};
  const HeatmapStack h = render_heatmaps(k, 256, 64, 2.0);
  CHECK(h.at(0, 20, 10) == 1.0f);
  CHECK(h.at(0, 20, 12) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  CHECK(h.at(0, 22, 10) == doctest::Approx(0.6065).epsilon(1e-4));
  double sum = 0.0;
  for (float v : h.channel(1)) sum += v;
  CHECK(sum == 0.0);
}

TEST_CASE("decode rules") {
  HeatmapStack h(64);
  const Keypoints2D empty = decode_heatmaps(h, 256);
  for (const auto& p : empty.points) CHECK_FALSE(p.visible);

  h.at(2, 5, 9) = 0.8f;
  h.at(2, 40, 3) = 0.8f;
  const Keypoints2D d = decode_heatmaps(h, 256);
  CHECK(d.points[2].visible);
  CHECK(d.points[2].u == doctest::Approx(9.5 * 4));
  CHECK(d.points[2].v == doctest::Approx(5.5 * 4));
}

TEST_CASE("render then decode stays within half a cell") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uv(0.0, 255.999);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Keypoints2D k;
    for (auto& p : k.points) p = Keypoint{uv(rng), uv(rng), true};
    const Keypoints2D d = decode_heatmaps(render_heatmaps(k, 256), 256);
    for (int i = 0; i < 15; ++i) {
      CHECK(d.points[i].visible);
      worst = std::max({worst, std::abs(d.points[i].u - k.points[i].u),
                        std::abs(d.points[i].v - k.points[i].v)});
    }
  }
  CHECK(worst <= 2.0);
}

TEST_CASE("unprojection inverts projection") {
  FisheyeIntrinsics intr;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(0.0, intr.fov / 2), az(-M_PI, M_PI);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d d = direction(th(rng), az(rng));
    const Projection p = project(d, intr);
    const auto back = unproject(p.u, p.v, intr);
    REQUIRE(back.has_value());
    CHECK((*back - d).norm() < 1e-9);
  }
  CHECK_FALSE(unproject(0.0, 0.0, intr).has_value());
}

TEST_CASE("validation flags a perturbed keypoint and a missing pose") {
  const StereoRig rig;
  FrameRecord r;
  r.joints_device.frame = PoseFrame::kDevice;
  for (int j = 0; j < 16; ++j) r.joints_device.set_joint(j, {-20.0 + 2 * j, 30.0 + j, 45.0});
  r.keypoints = project_pose(r.joints_device, rig);
  const Eigen::Isometry3d world_from_dev =
      Eigen::Translation3d(5, 6, 7) * Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitY());
  r.left_camera_pose = (world_from_dev * rig.device_from_camera(View::kLeft)).matrix();
  r.right_camera_pose = (world_from_dev * rig.device_from_camera(View::kRight)).matrix();
  r.joints_world.frame = PoseFrame::kWorld;
  for (int j = 0; j < 16; ++j) r.joints_world.set_joint(j, world_from_dev * r.joints_device.joint(j));

  const auto ok = validate_frame(r, rig);
  CHECK(ok.ok());
  CHECK(ok.max_residual_px < 1e-6);

  FrameRecord moved = r;
  moved.keypoints.left.points[4].u += 3.0;
  CHECK(validate_frame(moved, rig).status == ValidationStatus::kResidualExceeded);

  FrameRecord missing = r;
  missing.right_camera_pose.reset();
  CHECK(validate_frame(missing, rig).status == ValidationStatus::kMissingField);

  FrameRecord shifted = r;
  shifted.joints_world.joints.col(2).array() += 1.0;
  CHECK(validate_frame(shifted, rig).status == ValidationStatus::kInconsistentPose);
}
