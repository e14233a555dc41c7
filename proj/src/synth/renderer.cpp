// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "uego/core/error.hpp"
#include "uego/core/skeleton.hpp"

namespace uego {
namespace {

struct Capsule {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  double radius = 0.0;
  Rgb color{};
  // Bounding cone seen from the camera.
  Eigen::Vector3d axis;
  double cos_half_angle = -1.0;
};

struct Hit {
  double depth = std::numeric_limits<double>::infinity();
  double coverage = 0.0;
  double shade = 0.0;
  Rgb color{};
};

void add_bounds(Capsule& c) {
  const Eigen::Vector3d mid = 0.5 * (c.a + c.b);
  const double extent = 0.5 * (c.b - c.a).norm() + c.radius * 1.5 + 1.0;
  const double dist = mid.norm();
  if (dist <= extent) {
    c.cos_half_angle = -1.0;
    c.axis = Eigen::Vector3d::UnitZ();
    return;
  }
  c.axis = mid / dist;
  c.cos_half_angle = std::cos(std::asin(extent / dist));
}

void add_body(std::vector<Capsule>& out, const Pose3D& pose, const CharacterProfile& profile,
              const Eigen::Isometry3d& cam_from_dev, bool draw_head) {
  const auto& topo = build_topology();
  for (const Bone& bone : topo.bones) {
    if (bone.child == index_of(Joint::kHead)) continue;
    Capsule c;
    c.a = cam_from_dev * pose.joint(bone.parent);
    c.b = cam_from_dev * pose.joint(bone.child);
    c.radius = profile.radius[bone.child];
    c.color = profile.color[bone.child];
    add_bounds(c);
    out.push_back(c);
  }
  if (draw_head) {
    const int h = index_of(Joint::kHead);
    Capsule c;
    c.a = c.b = cam_from_dev * pose.joint(h);
    c.radius = profile.radius[h];
    c.color = profile.color[h];
    add_bounds(c);
    out.push_back(c);
  }
}

// Closest approach between the ray t*d (t > 0) and segment [a, b].
void intersect(const Capsule& c, const Eigen::Vector3d& d, double pixel_angle, Hit& best) {
  const Eigen::Vector3d ab = c.b - c.a;
  const double ab2 = ab.squaredNorm();
  const double d_ab = d.dot(ab);
  const double d_a = d.dot(c.a);
  const double ab_a = ab.dot(c.a);
  double s = 0.0;
  double t = d_a;
  if (ab2 > 0.0) {
    const double denom = ab2 - d_ab * d_ab;
    s = denom > 1e-12 ? (d_ab * d_a - ab_a) / denom : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    t = d.dot(c.a + s * ab);
    // Re-project onto the segment for the clamped ray parameter.
    if (t > 0.0) {
      s = std::clamp((t * d_ab - ab_a) / ab2, 0.0, 1.0);
      t = d.dot(c.a + s * ab);
    }
  }
  if (t <= 0.0) return;
  const Eigen::Vector3d q = c.a + s * ab;
  const double dist = (q - t * d).norm();
  const double footprint = std::max(t * pixel_angle, 1e-6);
  const double coverage = std::clamp((c.radius - dist) / footprint + 0.5, 0.0, 1.0);
  if (coverage <= 0.0) return;
  const double depth = t - std::sqrt(std::max(0.0, c.radius * c.radius - dist * dist));
  if (depth < best.depth) {
    best.depth = depth;
    best.coverage = coverage;
    const double rel = std::min(1.0, dist / c.radius);
    best.shade = 0.55 + 0.45 * std::sqrt(1.0 - rel * rel);
    best.color = c.color;
  }
}

std::uint64_t view_seed(std::uint64_t background_seed, View view) {
  return background_seed * 2654435761ULL + static_cast<unsigned>(view);
}

RgbImage render_view(const std::vector<Capsule>& capsules, const FisheyeIntrinsics& intr,
                     std::uint64_t seed) {
  RgbImage img = noise_background(intr, seed);
  const int n = intr.image_size;
  const double pixel_angle = 1.0 / intr.focal();
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const auto ray = unproject(x + 0.5, y + 0.5, intr);
      if (!ray) continue;
      Hit hit;
      for (const Capsule& c : capsules) {
        if (ray->dot(c.axis) < c.cos_half_angle) continue;
        intersect(c, *ray, pixel_angle, hit);
      }
      if (hit.coverage <= 0.0) continue;
      std::uint8_t* px = img.at(x, y);
      for (int k = 0; k < 3; ++k) {
        const double fg = hit.shade * hit.color[k];
        const double v = hit.coverage * fg + (1.0 - hit.coverage) * px[k];
        px[k] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return img;
}

Eigen::Matrix4d as_matrix(const Eigen::Isometry3d& t) { return t.matrix(); }

}  // namespace

RgbImage noise_background(const FisheyeIntrinsics& intr, std::uint64_t seed) {
  const int n = intr.image_size;
  RgbImage img(n, n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> base_dist(60, 160);
  const int base[3] = {base_dist(rng), base_dist(rng), base_dist(rng)};
  std::uniform_int_distribution<int> noise(-25, 25);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      // Draw for every pixel so the stream does not depend on the circle.
      int bg[3];
      for (int k = 0; k < 3; ++k) bg[k] = std::clamp(base[k] + noise(rng), 0, 255);
      if (!unproject(x + 0.5, y + 0.5, intr)) continue;
      std::uint8_t* px = img.at(x, y);
      for (int k = 0; k < 3; ++k) px[k] = static_cast<std::uint8_t>(bg[k]);
    }
  }
  return img;
}

std::optional<Eigen::Vector3d> unproject(double u, double v, const FisheyeIntrinsics& intr) {
  const double du = u - intr.center();
  const double dv = v - intr.center();
  const double r = std::hypot(du, dv);
  const double theta = r / intr.focal();
  if (theta > 0.5 * intr.fov) return std::nullopt;
  if (r == 0.0) return Eigen::Vector3d::UnitZ();
  const double s = std::sin(theta);
  return Eigen::Vector3d(s * du / r, s * dv / r, std::cos(theta));
}

RgbImage render_background(const StereoRig& rig, View view, std::uint64_t background_seed) {
  return noise_background(rig.intrinsics(), view_seed(background_seed, view));
}

RenderedFrame render_frame(const Pose3D& device_pose, const StereoRig& rig,
                           const CharacterProfile& profile, const RenderOptions& options,
                           std::span<const SceneActor> others) {
  if (device_pose.frame != PoseFrame::kDevice) {
    throw ArgumentError("render_frame expects a device-frame pose");
  }
  RenderedFrame out;
  for (int v = 0; v < 2; ++v) {
    const View view = static_cast<View>(v);
    const Eigen::Isometry3d cam_from_dev = rig.camera_from_device(view);
    std::vector<Capsule> capsules;
    add_body(capsules, device_pose, profile, cam_from_dev, false);
    for (const SceneActor& actor : others) {
      if (actor.profile == nullptr) throw ArgumentError("scene actor without a profile");
      add_body(capsules, actor.pose, *actor.profile, cam_from_dev, true);
    }
    RgbImage img = render_view(capsules, rig.intrinsics(), view_seed(options.background_seed, view));
    (v == 0 ? out.left : out.right) = std::move(img);
  }
  FrameRecord& rec = out.record;
  rec.joints_device = device_pose;
  rec.keypoints = project_pose(device_pose, rig);
  if (options.world_from_device) {
    const Eigen::Isometry3d& w = *options.world_from_device;
    rec.left_camera_pose = as_matrix(w * rig.device_from_camera(View::kLeft));
    rec.right_camera_pose = as_matrix(w * rig.device_from_camera(View::kRight));
    rec.joints_world.frame = PoseFrame::kWorld;
    for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
      rec.joints_world.set_joint(j, w * device_pose.joint(j));
    }
  }
  return out;
}

}  // namespace uego
