// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "uego/core/error.hpp"
#include "uego/synth/categories.hpp"

namespace uego {
namespace {

constexpr double kMmPerCm = 10.0;
constexpr double kDegenerateSpread = 1e-12;

PointSet points_of(const Pose3D& p) { return p.joints; }

}  // namespace

double mpjpe(const Pose3D& truth, const Pose3D& pred) {
  return (truth.joints - pred.joints).rowwise().norm().mean() * kMmPerCm;
}

PointSet Similarity::apply(const PointSet& points) const {
  PointSet out = (scale * (points * rotation.transpose())).eval();
  out.rowwise() += translation.transpose();
  return out;
}

Similarity procrustes_transform(const PointSet& truth, const PointSet& pred) {
  if (truth.rows() != pred.rows() || truth.rows() == 0) {
    throw ArgumentError("procrustes: point counts differ or are zero");
  }
  const Eigen::RowVector3d mu_x = truth.colwise().mean();
  const Eigen::RowVector3d mu_y = pred.colwise().mean();
  const PointSet x = truth.rowwise() - mu_x;
  const PointSet y = pred.rowwise() - mu_y;
  const double var_y = y.squaredNorm();
  if (var_y < kDegenerateSpread || x.squaredNorm() < kDegenerateSpread) {
    throw DomainError("procrustes: degenerate pose (all joints coincide)");
  }
  const Eigen::Matrix3d h = x.transpose() * y;
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d d = Eigen::Vector3d::Ones();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d[2] = -1.0;
  Similarity s;
  s.rotation = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
  s.scale = svd.singularValues().dot(d) / var_y;
  s.translation = mu_x.transpose() - s.scale * s.rotation * mu_y.transpose();
  return s;
}

double alignment_residual(const PointSet& truth, const PointSet& pred, const Similarity& transform) {
  return (truth - transform.apply(pred)).squaredNorm();
}

Pose3D procrustes_align(const Pose3D& truth, const Pose3D& pred) {
  const PointSet p = points_of(pred);
  Pose3D out = pred;
  out.joints = procrustes_transform(points_of(truth), p).apply(p);
  return out;
}

double pa_mpjpe(const Pose3D& truth, const Pose3D& pred) { return mpjpe(truth, procrustes_align(truth, pred)); }

const CategoryError* EvalReport::find(const std::string& category) const {
  for (const auto& c : categories) {
    if (c.category == category) return &c;
  }
  return nullptr;
}

EvalReport aggregate(std::span<const FrameError> frames, const std::string& pose_frame) {
  if (frames.empty()) throw ArgumentError("aggregate: no frames");
  struct Sum {
    std::size_t n = 0;
    double mpjpe = 0.0;
    double pa = 0.0;
  };
  std::map<std::string, Sum> sums;
  EvalReport r;
  r.pose_frame = pose_frame;
  for (const FrameError& f : frames) {
    Sum& s = sums[f.category];
    ++s.n;
    s.mpjpe += f.mpjpe;
    s.pa += f.pa_mpjpe;
    r.mpjpe += f.mpjpe;
    r.pa_mpjpe += f.pa_mpjpe;
  }
  r.frames = frames.size();
  r.mpjpe /= static_cast<double>(r.frames);
  r.pa_mpjpe /= static_cast<double>(r.frames);
  auto emit = [&](const std::string& name, const Sum& s) {
    r.categories.push_back({name, s.n, s.mpjpe / static_cast<double>(s.n), s.pa / static_cast<double>(s.n)});
  };
  for (std::string_view name : motion_categories()) {
    const auto it = sums.find(std::string(name));
    if (it == sums.end()) continue;
    emit(it->first, it->second);
    sums.erase(it);
  }
  for (const auto& [name, s] : sums) emit(name, s);
  return r;
}

MeanSigma mean_sigma(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean_sigma: no values");
  const double n = static_cast<double>(values.size());
  MeanSigma m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.sigma = std::sqrt(ss / n);
  return m;
}

std::string format_mean_sigma(const MeanSigma& value, int runs) {
  char buf[64];
  if (runs > 1) {
    std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", value.mean, value.sigma);
  } else {
    std::snprintf(buf, sizeof(buf), "%.2f", value.mean);
  }
  return buf;
}

MultiRunReport aggregate_runs(std::span<const EvalReport> runs) {
  if (runs.empty()) throw ArgumentError("aggregate_runs: no runs");
  MultiRunReport m;
  m.runs.assign(runs.begin(), runs.end());
  std::vector<double> a, b;
  for (const EvalReport& r : runs) {
    a.push_back(r.mpjpe);
    b.push_back(r.pa_mpjpe);
  }
  m.mpjpe = mean_sigma(a);
  m.pa_mpjpe = mean_sigma(b);
  for (std::string_view name : motion_categories()) {
    CategorySummary cs;
    cs.category = std::string(name);
    std::vector<double> ca, cb;
    for (const EvalReport& r : runs) {
      if (const CategoryError* c = r.find(cs.category)) {
        ca.push_back(c->mpjpe);
        cb.push_back(c->pa_mpjpe);
      }
    }
    cs.runs = static_cast<int>(ca.size());
    if (!ca.empty()) {
      cs.mpjpe = mean_sigma(ca);
      cs.pa_mpjpe = mean_sigma(cb);
    }
    m.categories.push_back(std::move(cs));
  }
  return m;
}

nlohmann::json to_json_value(const EvalReport& r) {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : r.categories) {
    cats.push_back({{"category", c.category}, {"frames", c.frames}, {"mpjpe_mm", c.mpjpe}, {"pa_mpjpe_mm", c.pa_mpjpe}});
  }
  return {{"pose_frame", r.pose_frame},
          {"frames", r.frames},
          {"mpjpe_mm", r.mpjpe},
          {"pa_mpjpe_mm", r.pa_mpjpe},
          {"categories", cats}};
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.pose_frame = j.at("pose_frame").get<std::string>();
    r.frames = j.at("frames").get<std::size_t>();
    r.mpjpe = j.at("mpjpe_mm").get<double>();
    r.pa_mpjpe = j.at("pa_mpjpe_mm").get<double>();
    for (const auto& c : j.at("categories")) {
      r.categories.push_back({c.at("category").get<std::string>(), c.at("frames").get<std::size_t>(),
                              c.at("mpjpe_mm").get<double>(), c.at("pa_mpjpe_mm").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad eval report: ") + e.what());
  }
  return r;
}

nlohmann::json to_json_value(const MultiRunReport& m) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : m.runs) runs.push_back(to_json_value(r));
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : m.categories) {
    if (c.runs == 0) continue;
    cats.push_back({{"category", c.category},
                    {"runs", c.runs},
                    {"mpjpe_mm", {{"mean", c.mpjpe.mean}, {"sigma", c.mpjpe.sigma}}},
                    {"pa_mpjpe_mm", {{"mean", c.pa_mpjpe.mean}, {"sigma", c.pa_mpjpe.sigma}}}});
  }
  return {{"runs", runs},
          {"mpjpe_mm", {{"mean", m.mpjpe.mean}, {"sigma", m.mpjpe.sigma}}},
          {"pa_mpjpe_mm", {{"mean", m.pa_mpjpe.mean}, {"sigma", m.pa_mpjpe.sigma}}},
          {"categories", cats}};
}

std::string format_eval_table(const MultiRunReport& m, bool by_category) {
  const int runs = static_cast<int>(m.runs.size());
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %16s %16s\n", by_category ? "Category" : "", "MPJPE (mm)",
                "PA-MPJPE (mm)");
  out += line;
  if (by_category) {
    for (const auto& c : m.categories) {
      const std::string a = c.runs ? format_mean_sigma(c.mpjpe, c.runs) : "-";
      const std::string b = c.runs ? format_mean_sigma(c.pa_mpjpe, c.runs) : "-";
      std::snprintf(line, sizeof(line), "%-28s %16s %16s\n", c.category.c_str(), a.c_str(), b.c_str());
      out += line;
    }
  }
  std::snprintf(line, sizeof(line), "%-28s %16s %16s\n", "overall", format_mean_sigma(m.mpjpe, runs).c_str(),
                format_mean_sigma(m.pa_mpjpe, runs).c_str());
  out += line;
  return out;
}

}  // namespace uego
