// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Geometry>

#include "uego/metrics/metrics.hpp"

namespace uego::test {

struct GridResult {
  double residual = std::numeric_limits<double>::infinity();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double scale = 0.0;
};

/// Exhaustive search over Z-Y-X Euler angles on a 1 degree grid. For each
/// rotation the best non-negative scale and translation are closed form.
/// `allow_reflection` additionally tries every rotation composed with a mirror.
inline GridResult grid_search_procrustes(const PointSet& truth, const PointSet& pred, bool allow_reflection = false) {
  const Eigen::RowVector3d mu_x = truth.colwise().mean();
  const Eigen::RowVector3d mu_y = pred.colwise().mean();
  const PointSet x = truth.rowwise() - mu_x;
  const PointSet y0 = pred.rowwise() - mu_y;
  const double xx = x.squaredNorm();
  GridResult best;
  const double deg = std::numbers::pi / 180.0;
  for (int mirror = 0; mirror <= (allow_reflection ? 1 : 0); ++mirror) {
    PointSet y = y0;
    if (mirror) y.col(0) = -y.col(0);
    const double yy = y.squaredNorm();
    const Eigen::Matrix3d cross = y.transpose() * x;
    std::vector<Eigen::Matrix3d> rx;
    for (int c = -180; c < 180; ++c) rx.push_back(Eigen::AngleAxisd(c * deg, Eigen::Vector3d::UnitX()).toRotationMatrix());
    for (int a = -180; a < 180; ++a) {
      const Eigen::Matrix3d rz = Eigen::AngleAxisd(a * deg, Eigen::Vector3d::UnitZ()).toRotationMatrix();
      for (int b = -90; b <= 90; ++b) {
        const Eigen::Matrix3d rzy = rz * Eigen::AngleAxisd(b * deg, Eigen::Vector3d::UnitY()).toRotationMatrix();
        for (const Eigen::Matrix3d& roll : rx) {
          const Eigen::Matrix3d r = rzy * roll;
          // sum_j x_j . (R y_j) = trace(R * Y^T X)
          const double corr = (r.array() * cross.transpose().array()).sum();
          const double s = std::max(0.0, corr / yy);
          const double residual = xx - 2.0 * s * corr + s * s * yy;
          if (residual < best.residual) {
            best.residual = residual;
            best.rotation = r;
            best.scale = s;
          }
        }
      }
    }
  }
  return best;
}

/// Upper bound on how far the grid optimum may exceed the true optimum
/// `optimum` for a solution with scale `scale`: every rotation lies within
/// 1.5 degrees (three half-steps) of a grid rotation, and a rotation error d
/// moves each centred point by at most d * |y|.
inline double grid_resolution_bound(const PointSet& pred, double scale, double optimum) {
  const PointSet y = pred.rowwise() - pred.colwise().mean();
  const double delta = 1.5 * std::numbers::pi / 180.0;
  const double worst = std::sqrt(std::max(optimum, 0.0)) + scale * delta * y.norm();
  return worst * worst - optimum;
}

}  // namespace uego::test
