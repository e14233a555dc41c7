// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "procrustes_oracle.hpp"
#include "uego/core/error.hpp"
#include "uego/metrics/metrics.hpp"

using namespace uego;

namespace {

Pose3D random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-60.0, 60.0);
  Pose3D p;
  for (int j = 0; j < 16; ++j) p.set_joint(j, {u(rng), u(rng), u(rng)});
  return p;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
}

Pose3D transformed(const Pose3D& p, double s, const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
  Pose3D q = p;
  q.joints = (s * (p.joints * r.transpose())).rowwise() + t.transpose();
  return q;
}

}  // namespace

TEST_CASE("mpjpe hand cases") {
  std::mt19937_64 rng(1);
  const Pose3D p = random_pose(rng);
  CHECK(mpjpe(p, p) == 0.0);
  Pose3D q = p;
  q.joints.rowwise() += Eigen::RowVector3d(1.0, 0.0, 0.0);
  CHECK(mpjpe(p, q) == doctest::Approx(10.0).epsilon(1e-12));
  Pose3D r = p;
  r.set_joint(3, p.joint(3) + Eigen::Vector3d(3, 4, 0));
  CHECK(mpjpe(p, r) == doctest::Approx(3.125).epsilon(1e-12));
}

TEST_CASE("procrustes identity and exact similarity recovery") {
  std::mt19937_64 rng(2);
  const Pose3D p = random_pose(rng);
  const Similarity id = procrustes_transform(p.joints, p.joints);
  CHECK(std::abs(id.scale - 1.0) < 1e-9);
  CHECK((id.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-9);
  CHECK(id.translation.norm() < 1e-9);

  const Eigen::Matrix3d r0 = random_rotation(rng);
  const Pose3D q = transformed(p, 0.5, r0, {12.0, -3.0, 40.0});
  const Pose3D aligned = procrustes_align(p, q);
  CHECK((aligned.joints - p.joints).norm() < 1e-9);
  CHECK(pa_mpjpe(p, q) < 1e-6);
}

TEST_CASE("procrustes never returns a reflection") {
  std::mt19937_64 rng(3);
  const Pose3D p = random_pose(rng);
  Pose3D mirrored = p;
  mirrored.joints.col(0) *= -1.0;
  const Similarity s = procrustes_transform(p.joints, mirrored.joints);
  CHECK(s.rotation.determinant() == doctest::Approx(1.0));
  CHECK(alignment_residual(p.joints, mirrored.joints, s) > 1.0);
  CHECK(pa_mpjpe(p, mirrored) > 0.0);
}

TEST_CASE("procrustes rejects degenerate poses") {
  Pose3D flat;
  std::mt19937_64 rng(4);
  CHECK_THROWS_AS(procrustes_transform(random_pose(rng).joints, flat.joints), DomainError);
  CHECK_THROWS_AS(pa_mpjpe(flat, random_pose(rng)), DomainError);
}

TEST_CASE("alignment never increases squared error and is invariant to similarity transforms") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 5.0);
  std::uniform_real_distribution<double> scale(0.2, 5.0);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose3D p = random_pose(rng);
    Pose3D q = p;
    for (int k = 0; k < q.joints.size(); ++k) q.joints.data()[k] += noise(rng);
    const Pose3D aligned = procrustes_align(p, q);
    if ((p.joints - aligned.joints).squaredNorm() > (p.joints - q.joints).squaredNorm() + 1e-9) ++violations;
    const double pa = pa_mpjpe(p, q);
    CHECK(pa > 0.0);
    const Pose3D moved = transformed(q, scale(rng), random_rotation(rng), {noise(rng), noise(rng), noise(rng)});
    CHECK(std::abs(pa_mpjpe(p, moved) - pa) < 1e-9);
  }
  CHECK(violations == 0);
}

TEST_CASE("procrustes agrees with a brute-force rotation grid on three-joint toys") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 2; ++trial) {
    PointSet x(3, 3), y(3, 3);
    for (int i = 0; i < 9; ++i) {
      x.data()[i] = u(rng);
      y.data()[i] = u(rng);
    }
    const Similarity s = procrustes_transform(x, y);
    const double closed = alignment_residual(x, y, s);
    const test::GridResult grid = test::grid_search_procrustes(x, y);
    CHECK(closed <= grid.residual + 1e-9);
    CHECK(grid.residual - closed <= test::grid_resolution_bound(y, s.scale, closed));
  }
}

TEST_CASE("aggregation and multi-run statistics") {
  std::vector<FrameError> frames{{"jumping", 10.0, 5.0}, {"jumping", 20.0, 7.0}, {"boxing", 60.0, 30.0}};
  const EvalReport r = aggregate(frames);
  CHECK(r.frames == 3);
  CHECK(r.mpjpe == doctest::Approx(30.0));
  REQUIRE(r.find("jumping") != nullptr);
  CHECK(r.find("jumping")->mpjpe == doctest::Approx(15.0));
  double weighted = 0.0;
  for (const auto& c : r.categories) weighted += c.mpjpe * static_cast<double>(c.frames);
  CHECK(std::abs(weighted / 3.0 - r.mpjpe) < 1e-9);
  CHECK_THROWS_AS(aggregate(std::vector<FrameError>{}), ArgumentError);

  std::vector<FrameError> one{{"jumping", 42.0, 21.0}};
  const EvalReport single = aggregate(one);
  CHECK(single.mpjpe == 42.0);
  CHECK(single.categories.size() == 1);

  auto with_overall = [](double v) {
    EvalReport e;
    e.frames = 1;
    e.mpjpe = v;
    e.pa_mpjpe = v / 2;
    return e;
  };
  const std::vector<EvalReport> same{with_overall(79), with_overall(79), with_overall(79)};
  CHECK(aggregate_runs(same).mpjpe.mean == doctest::Approx(79.0));
  CHECK(aggregate_runs(same).mpjpe.sigma == 0.0);
  const std::vector<EvalReport> spread{with_overall(78), with_overall(79), with_overall(80)};
  const MultiRunReport m = aggregate_runs(spread);
  CHECK(m.mpjpe.mean == doctest::Approx(79.0));
  CHECK(m.mpjpe.sigma == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("tables use mean (sigma) formatting and list every category") {
  CHECK(format_mean_sigma({79.06, 0.25}, 3) == "79.06 (0.25)");
  CHECK(format_mean_sigma({79.06, 0.0}, 1) == "79.06");
  std::vector<FrameError> frames{{"jumping", 10.0, 5.0}};
  const std::vector<EvalReport> runs{aggregate(frames)};
  const MultiRunReport m = aggregate_runs(runs);
  const std::string table = format_eval_table(m, true);
  CHECK(std::count(table.begin(), table.end(), '\n') == 32);
  CHECK(table.find("overall") != std::string::npos);
  const EvalReport back = eval_report_from_json(to_json_value(runs[0]));
  CHECK(back.mpjpe == runs[0].mpjpe);
  CHECK(back.categories.size() == 1);
}
