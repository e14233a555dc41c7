// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "uego/core/pose.hpp"

namespace uego {

using PointSet = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Mean joint distance in millimetres; poses are in centimetres.
double mpjpe(const Pose3D& truth, const Pose3D& pred);

/// x -> scale * rotation * x + translation.
struct Similarity {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  PointSet apply(const PointSet& points) const;
};

/// Least-squares similarity (proper rotation, positive scale) taking `pred`
/// onto `truth`. Throws DomainError when either point set is degenerate.
Similarity procrustes_transform(const PointSet& truth, const PointSet& pred);
/// Sum of squared distances between `truth` and `transform(pred)`.
double alignment_residual(const PointSet& truth, const PointSet& pred, const Similarity& transform);

Pose3D procrustes_align(const Pose3D& truth, const Pose3D& pred);
double pa_mpjpe(const Pose3D& truth, const Pose3D& pred);

struct FrameError {
  std::string category;
  double mpjpe = 0.0;
  double pa_mpjpe = 0.0;
};

struct CategoryError {
  std::string category;
  std::size_t frames = 0;
  double mpjpe = 0.0;
  double pa_mpjpe = 0.0;
};

/// One evaluation pass. Categories follow the motion catalogue order and
/// only those with frames appear.
struct EvalReport {
  std::string pose_frame = "device";
  std::size_t frames = 0;
  double mpjpe = 0.0;
  double pa_mpjpe = 0.0;
  std::vector<CategoryError> categories;

  const CategoryError* find(const std::string& category) const;
};

/// Frames are weighted equally. Throws ArgumentError on empty input.
EvalReport aggregate(std::span<const FrameError> frames, const std::string& pose_frame = "device");

struct MeanSigma {
  double mean = 0.0;
  /// Population standard deviation.
  double sigma = 0.0;
};

MeanSigma mean_sigma(std::span<const double> values);
/// "79.06 (0.25)"; a single run prints without the bracket.
std::string format_mean_sigma(const MeanSigma& value, int runs);

struct CategorySummary {
  std::string category;
  MeanSigma mpjpe;
  MeanSigma pa_mpjpe;
  int runs = 0;
};

struct MultiRunReport {
  std::vector<EvalReport> runs;
  MeanSigma mpjpe;
  MeanSigma pa_mpjpe;
  /// All catalogue categories in order; `runs` is zero where no run had frames.
  std::vector<CategorySummary> categories;
};

MultiRunReport aggregate_runs(std::span<const EvalReport> runs);

nlohmann::json to_json_value(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);
nlohmann::json to_json_value(const MultiRunReport& report);

/// Fixed-width table: one "overall" row, or one row per catalogue category
/// followed by the overall row when `by_category` is set.
std::string format_eval_table(const MultiRunReport& report, bool by_category);

}  // namespace uego
