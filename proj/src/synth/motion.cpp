// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/synth/motion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Geometry>

#include "uego/core/error.hpp"
#include "uego/synth/categories.hpp"

namespace uego {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = kPi / 180.0;

struct Limits {
  double lo[3];
  double hi[3];
};

// Degrees, per joint, in (pitch, roll, yaw) order.
Limits joint_limits(int j) {
  switch (static_cast<Joint>(j)) {
    case Joint::kHead: return {{-45, -35, -75}, {45, 35, 75}};
    case Joint::kUpperArmL: case Joint::kUpperArmR: return {{-20, -20, -20}, {20, 20, 20}};
    case Joint::kLowerArmL: case Joint::kLowerArmR: return {{-90, -110, -110}, {180, 110, 70}};
    case Joint::kHandL: case Joint::kHandR: return {{-30, -30, -150}, {30, 30, 5}};
    case Joint::kThighL: case Joint::kThighR: return {{-10, -10, -10}, {10, 10, 10}};
    case Joint::kCalfL: case Joint::kCalfR: return {{-40, -20, -40}, {130, 60, 40}};
    case Joint::kFootL: case Joint::kFootR: return {{-155, -5, -5}, {0, 5, 5}};
    case Joint::kBallL: case Joint::kBallR: return {{-40, -20, -20}, {60, 20, 20}};
    case Joint::kNeck: break;
  }
  return {{0, 0, 0}, {0, 0, 0}};
}

double ease(double s) { return s * s * (3.0 - 2.0 * s); }

double waves_at(const std::vector<Sinusoid>& waves, double t) {
  double v = 0.0;
  for (const auto& w : waves) v += w.at(t);
  return v;
}

// Shorthands for the limb joints by role; `side` 0 = left, 1 = right.
Joint shoulder(int side) { return side == 0 ? Joint::kLowerArmL : Joint::kLowerArmR; }
Joint elbow(int side) { return side == 0 ? Joint::kHandL : Joint::kHandR; }
Joint hip(int side) { return side == 0 ? Joint::kCalfL : Joint::kCalfR; }
Joint knee(int side) { return side == 0 ? Joint::kFootL : Joint::kFootR; }
Joint ankle(int side) { return side == 0 ? Joint::kBallL : Joint::kBallR; }

/// Assembles a clip from posture targets and oscillators, in degrees.
class ClipBuilder {
 public:
  ClipBuilder(std::mt19937_64& rng, double scale) : rng_(rng), scale_(scale) {
    for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
      if (j == index_of(Joint::kNeck)) continue;
      const Limits lim = joint_limits(j);
      for (int a = 0; a < 3; ++a) {
        AngleTrack t;
        t.joint = j;
        t.axis = static_cast<Dof>(a);
        t.lower = lim.lo[a] * kDeg;
        t.upper = lim.hi[a] * kDeg;
        tracks_.push_back(t);
      }
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double phase() { return uniform(0.0, 2.0 * kPi); }
  double sign() { return uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0; }

  /// Static posture, with a little per-clip variation.
  void hold(Joint j, Dof d, double deg, double jitter = 4.0) {
    AngleTrack& t = track(j, d);
    t.start = t.end = (deg + uniform(-jitter, jitter)) * kDeg;
  }
  /// Posture that moves from `from` to `to` over the clip.
  void blend(Joint j, Dof d, double from, double to, double jitter = 4.0) {
    AngleTrack& t = track(j, d);
    const double base = (from + uniform(-jitter, jitter)) * kDeg;
    t.start = base;
    t.end = base + scale_ * (to - from) * kDeg;
  }
  void wave(Joint j, Dof d, double amp_deg, double freq_hz, double ph) {
    track(j, d).waves.push_back(Sinusoid{scale_ * amp_deg * kDeg, freq_hz, ph});
  }
  void both(Joint (*role)(int), Dof d, double deg, double jitter = 4.0) {
    hold(role(0), d, deg, jitter);
    hold(role(1), d, deg, jitter);
  }
  void both_blend(Joint (*role)(int), Dof d, double from, double to) {
    const double jit = uniform(-3.0, 3.0);
    blend(role(0), d, from + jit, to + jit, 0.0);
    blend(role(1), d, from + jit, to + jit, 0.0);
  }
  /// Antiphase oscillation on both sides, as in gait.
  void alternate(Joint (*role)(int), Dof d, double amp, double freq, double ph) {
    wave(role(0), d, amp, freq, ph);
    wave(role(1), d, amp, freq, ph + kPi);
  }

  void standing() {
    both(shoulder, Dof::kRoll, -75.0, 8.0);
    both(elbow, Dof::kYaw, -15.0, 8.0);
    idle_head();
  }
  void crouched(double depth = 1.0) {
    root.lean_start = root.lean_end = (30.0 * depth + uniform(-5, 5)) * kDeg;
    both(hip, Dof::kPitch, 110.0 * depth);
    both(knee, Dof::kPitch, -130.0 * depth);
    both(ankle, Dof::kPitch, 40.0 * depth);
    both(shoulder, Dof::kRoll, -70.0, 8.0);
    both(shoulder, Dof::kPitch, 35.0 * depth, 10.0);
    both(elbow, Dof::kYaw, -40.0, 10.0);
    idle_head();
  }
  void idle_head() {
    wave(Joint::kHead, Dof::kPitch, uniform(3, 10), uniform(0.2, 0.6), phase());
    wave(Joint::kHead, Dof::kYaw, uniform(5, 20), uniform(0.1, 0.5), phase());
  }
  void walk(double speed_cm_s, double step_hz, double direction_deg) {
    const double dir = direction_deg * kDeg;
    root.velocity = scale_ * speed_cm_s * Eigen::Vector2d(std::sin(dir), std::cos(dir));
    const double ph = phase();
    alternate(hip, Dof::kPitch, 25.0, step_hz, ph);
    alternate(knee, Dof::kPitch, 20.0, step_hz, ph + 0.5 * kPi);
    both(knee, Dof::kPitch, -25.0);
    alternate(shoulder, Dof::kPitch, 20.0, step_hz, ph + kPi);
  }
  void turn(double min_deg, double max_deg) {
    root.total_yaw = scale_ * sign() * uniform(min_deg, max_deg) * kDeg;
  }
  void jumps(double height_lo, double height_hi, double period) {
    root.jump_height = scale_ * uniform(height_lo, height_hi);
    root.jump_period = period;
  }
  /// Random extra oscillators over the given joints.
  void fidget(std::initializer_list<Joint> joints, double amp_hi, double freq_hi) {
    for (Joint j : joints) {
      for (int a = 0; a < 3; ++a) {
        if (uniform(0.0, 1.0) < 0.5) {
          wave(j, static_cast<Dof>(a), uniform(0.3, 1.0) * amp_hi, uniform(0.2, freq_hi), phase());
        }
      }
    }
  }

  std::vector<AngleTrack> take_tracks() { return std::move(tracks_); }

  RootTrack root;

 private:
  AngleTrack& track(Joint j, Dof d) {
    const int idx = index_of(j);
    // The neck has no track, so joints after it shift down by one slot.
    const int slot = (idx > index_of(Joint::kNeck) ? idx - 1 : idx) * 3 + static_cast<int>(d);
    return tracks_[static_cast<std::size_t>(slot)];
  }

  std::mt19937_64& rng_;
  double scale_;
  std::vector<AngleTrack> tracks_;
};

void build_template(int category, ClipBuilder& b, double scale) {
  RootTrack& r = b.root;
  auto root_wave = [&](std::vector<Sinusoid>& list, double amp_deg, double freq) {
    list.push_back(Sinusoid{scale * amp_deg * kDeg, freq, b.phase()});
  };
  const std::string_view name = motion_categories()[static_cast<std::size_t>(category)];

  if (name == "jumping") {
    b.standing();
    const double period = b.uniform(0.7, 1.1);
    b.jumps(20.0, 45.0, period);
    b.wave(shoulder(0), Dof::kPitch, 45.0, 1.0 / period, 0.0);
    b.wave(shoulder(1), Dof::kPitch, 45.0, 1.0 / period, 0.0);
    b.both(knee, Dof::kPitch, -20.0);
  } else if (name == "falling down") {
    b.standing();
    const double dir = b.sign();
    r.lean_start = 0.0;
    r.lean_end = scale * b.uniform(60.0, 85.0) * kDeg * dir;
    b.both_blend(knee, Dof::kPitch, 0.0, -60.0);
    b.both_blend(hip, Dof::kPitch, 0.0, 40.0);
    b.both_blend(shoulder, Dof::kPitch, 0.0, 80.0 * dir);
  } else if (name == "exercising") {
    b.standing();
    const double f = b.uniform(0.5, 1.2);
    b.wave(shoulder(0), Dof::kRoll, 70.0, f, 0.0);
    b.wave(shoulder(1), Dof::kRoll, 70.0, f, 0.0);
    b.wave(hip(0), Dof::kRoll, 15.0, f, 0.0);
    b.wave(hip(1), Dof::kRoll, 15.0, f, 0.0);
    b.jumps(0.0, 10.0, 1.0 / f);
  } else if (name == "pulling") {
    b.standing();
    r.lean_start = r.lean_end = -15.0 * kDeg;
    b.both(hip, Dof::kPitch, 25.0);
    b.both(knee, Dof::kPitch, -30.0);
    b.both(shoulder, Dof::kPitch, 75.0);
    b.both(elbow, Dof::kYaw, -60.0);
    const double f = b.uniform(0.4, 0.9);
    b.wave(elbow(0), Dof::kYaw, 35.0, f, 0.0);
    b.wave(elbow(1), Dof::kYaw, 35.0, f, 0.0);
    r.velocity = scale * Eigen::Vector2d(0.0, -b.uniform(10.0, 30.0));
  } else if (name == "singing") {
    b.standing();
    const int side = b.uniform(0, 1) < 0.5 ? 0 : 1;
    b.hold(shoulder(side), Dof::kPitch, 60.0);
    b.hold(elbow(side), Dof::kYaw, -110.0);
    b.fidget({shoulder(1 - side), Joint::kHead}, 25.0, 0.8);
    root_wave(r.side_waves, 6.0, b.uniform(0.3, 0.8));
  } else if (name == "rolling") {
    r.lean_start = r.lean_end = -90.0 * kDeg;
    r.spin_start = 0.0;
    r.spin_end = scale * b.sign() * b.uniform(180.0, 360.0) * kDeg;
    b.both(shoulder, Dof::kRoll, -80.0);
    r.velocity = scale * Eigen::Vector2d(b.uniform(20.0, 50.0), 0.0);
  } else if (name == "crawling") {
    r.lean_start = r.lean_end = 90.0 * kDeg;
    b.both(hip, Dof::kPitch, 90.0);
    b.both(knee, Dof::kPitch, -90.0);
    b.both(shoulder, Dof::kRoll, -90.0, 2.0);
    b.both(shoulder, Dof::kPitch, 90.0);
    const double f = b.uniform(0.6, 1.2);
    const double ph = b.phase();
    b.alternate(hip, Dof::kPitch, 15.0, f, ph);
    b.alternate(shoulder, Dof::kPitch, 15.0, f, ph + 3.14159);
    r.velocity = scale * Eigen::Vector2d(0.0, b.uniform(15.0, 35.0));
    b.hold(Joint::kHead, Dof::kPitch, -30.0);
  } else if (name == "laying") {
    r.lean_start = r.lean_end = -90.0 * kDeg;
    b.both(shoulder, Dof::kRoll, -70.0, 15.0);
    b.fidget({shoulder(0), shoulder(1), hip(0), hip(1), Joint::kHead}, 12.0, 0.4);
  } else if (name == "sitting on the ground") {
    r.lean_start = r.lean_end = -15.0 * kDeg;
    b.both(hip, Dof::kPitch, 80.0);
    b.both(knee, Dof::kPitch, -35.0, 15.0);
    b.both(shoulder, Dof::kRoll, -70.0);
    b.both(shoulder, Dof::kPitch, -30.0);
    b.fidget({shoulder(0), shoulder(1), Joint::kHead}, 15.0, 0.5);
  } else if (name == "crouching - normal") {
    b.crouched();
    b.fidget({shoulder(0), shoulder(1), elbow(0), elbow(1)}, 15.0, 0.6);
  } else if (name == "crouching - turning") {
    b.crouched();
    b.turn(90.0, 180.0);
  } else if (name == "crouching - to standing") {
    b.standing();
    r.lean_start = 30.0 * kDeg;
    r.lean_end = 30.0 * kDeg * (1.0 - scale);
    b.both_blend(hip, Dof::kPitch, 110.0, 0.0);
    b.both_blend(knee, Dof::kPitch, -130.0, 0.0);
    b.both_blend(ankle, Dof::kPitch, 40.0, 0.0);
  } else if (name == "crouching - forward") {
    b.crouched(0.85);
    b.walk(b.uniform(30.0, 50.0), b.uniform(0.8, 1.2), 0.0);
    b.both(knee, Dof::kPitch, -110.0);
  } else if (name == "crouching - backward") {
    b.crouched(0.85);
    b.walk(b.uniform(20.0, 40.0), b.uniform(0.8, 1.2), 180.0);
    b.both(knee, Dof::kPitch, -110.0);
  } else if (name == "crouching - sideways") {
    b.crouched(0.85);
    b.walk(b.uniform(20.0, 40.0), b.uniform(0.8, 1.2), b.sign() * 90.0);
    b.both(knee, Dof::kPitch, -110.0);
  } else if (name == "standing - whole body") {
    b.standing();
    b.fidget({shoulder(0), shoulder(1), elbow(0), elbow(1), hip(0), hip(1), knee(0), knee(1),
              Joint::kHead},
             30.0, 1.0);
    root_wave(r.lean_waves, 12.0, b.uniform(0.2, 0.6));
    root_wave(r.side_waves, 8.0, b.uniform(0.2, 0.6));
  } else if (name == "standing - upper body") {
    b.standing();
    b.fidget({shoulder(0), shoulder(1), elbow(0), elbow(1), Joint::kHead}, 35.0, 1.0);
    root_wave(r.lean_waves, 8.0, b.uniform(0.2, 0.6));
  } else if (name == "standing - turning") {
    b.standing();
    b.turn(100.0, 180.0);
    b.wave(knee(0), Dof::kPitch, 10.0, 1.0, 0.0);
    b.wave(knee(1), Dof::kPitch, 10.0, 1.0, 3.14159);
  } else if (name == "standing - to crouching") {
    b.standing();
    r.lean_start = 0.0;
    r.lean_end = scale * 30.0 * kDeg;
    b.both_blend(hip, Dof::kPitch, 0.0, 110.0);
    b.both_blend(knee, Dof::kPitch, 0.0, -130.0);
    b.both_blend(ankle, Dof::kPitch, 0.0, 40.0);
  } else if (name == "standing - forward") {
    b.standing();
    b.walk(b.uniform(80.0, 150.0), b.uniform(0.8, 1.1), b.uniform(-10.0, 10.0));
    r.lean_start = r.lean_end = 5.0 * kDeg;
  } else if (name == "standing - backward") {
    b.standing();
    b.walk(b.uniform(40.0, 70.0), b.uniform(0.8, 1.1), 180.0);
  } else if (name == "standing - sideways") {
    b.standing();
    b.walk(b.uniform(40.0, 80.0), b.uniform(0.8, 1.1), b.sign() * 90.0);
    const double f = b.uniform(0.8, 1.1);
    b.alternate(hip, Dof::kRoll, 15.0, f, b.phase());
  } else if (name == "dancing") {
    b.standing();
    b.fidget({shoulder(0), shoulder(1), elbow(0), elbow(1), hip(0), hip(1), knee(0), knee(1),
              Joint::kHead},
             50.0, 2.0);
    root_wave(r.yaw_waves, 40.0, b.uniform(0.2, 0.8));
    root_wave(r.side_waves, 10.0, b.uniform(0.5, 1.5));
    b.jumps(0.0, 12.0, b.uniform(0.4, 0.8));
  } else if (name == "boxing") {
    r.lean_start = r.lean_end = 10.0 * kDeg;
    b.both(shoulder, Dof::kRoll, -55.0);
    b.both(shoulder, Dof::kPitch, 60.0);
    b.both(elbow, Dof::kYaw, -120.0);
    b.both(knee, Dof::kPitch, -20.0);
    b.both(hip, Dof::kPitch, 15.0);
    const double f = b.uniform(1.0, 2.0);
    b.alternate(elbow, Dof::kYaw, 50.0, f, b.phase());
    b.jumps(0.0, 6.0, 0.5);
    root_wave(r.yaw_waves, 15.0, b.uniform(0.3, 0.8));
    b.idle_head();
  } else if (name == "wrestling") {
    b.crouched(0.5);
    b.both(shoulder, Dof::kPitch, 80.0);
    b.both(elbow, Dof::kYaw, -50.0);
    b.fidget({shoulder(0), shoulder(1), elbow(0), elbow(1)}, 25.0, 1.0);
    b.walk(b.uniform(10.0, 40.0), b.uniform(0.5, 1.0), b.uniform(-180.0, 180.0));
  } else if (name == "soccer") {
    b.standing();
    b.walk(b.uniform(60.0, 200.0), b.uniform(0.9, 1.4), b.uniform(-20.0, 20.0));
    const int side = b.uniform(0, 1) < 0.5 ? 0 : 1;
    b.wave(hip(side), Dof::kPitch, 40.0, b.uniform(0.4, 0.8), b.phase());
    b.hold(Joint::kHead, Dof::kPitch, -20.0);
  } else if (name == "baseball") {
    b.standing();
    b.both(shoulder, Dof::kPitch, 70.0);
    b.both(shoulder, Dof::kYaw, -30.0);
    b.both(elbow, Dof::kYaw, -70.0);
    b.both(knee, Dof::kPitch, -20.0);
    root_wave(r.yaw_waves, 60.0, b.uniform(0.3, 0.7));
  } else if (name == "basketball") {
    b.standing();
    b.walk(b.uniform(30.0, 120.0), b.uniform(0.8, 1.3), b.uniform(-30.0, 30.0));
    const int side = b.uniform(0, 1) < 0.5 ? 0 : 1;
    b.hold(shoulder(side), Dof::kPitch, 40.0);
    b.wave(elbow(side), Dof::kYaw, 35.0, b.uniform(1.5, 2.5), b.phase());
    b.jumps(0.0, 25.0, b.uniform(1.0, 1.6));
  } else if (name == "american football") {
    b.crouched(0.45);
    b.walk(b.uniform(120.0, 250.0), b.uniform(1.2, 1.6), b.uniform(-15.0, 15.0));
    b.hold(Joint::kHead, Dof::kPitch, -25.0);
  } else if (name == "golf") {
    r.lean_start = r.lean_end = 30.0 * kDeg;
    b.both(hip, Dof::kPitch, 35.0);
    b.both(knee, Dof::kPitch, -20.0);
    b.both(shoulder, Dof::kRoll, -80.0);
    b.both(shoulder, Dof::kPitch, 20.0);
    b.both(shoulder, Dof::kYaw, -20.0);
    b.hold(Joint::kHead, Dof::kPitch, -25.0);
    root_wave(r.yaw_waves, 70.0, b.uniform(0.2, 0.5));
  }
}

}  // namespace

double Sinusoid::at(double t) const {
  return amplitude * std::sin(2.0 * kPi * frequency_hz * t + phase);
}

double AngleTrack::at(double t, double progress) const {
  const double v = start + (end - start) * ease(progress) + waves_at(waves, t);
  return std::clamp(v, lower, upper);
}

double MotionClip::progress_of(int frame) const {
  return frame_count > 1 ? static_cast<double>(frame) / (frame_count - 1) : 0.0;
}

Eigen::Matrix3d RootState::rotation() const {
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(-lean, Eigen::Vector3d::UnitX()) *
          Eigen::AngleAxisd(side, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(spin, Eigen::Vector3d::UnitZ()))
      .toRotationMatrix();
}

MotionClip generate_motion(std::string_view category, double duration,
                           const CharacterProfile& profile, std::mt19937_64& rng,
                           const MotionOptions& options) {
  const int cat = category_index(category);
  if (!(duration > 0.0)) throw ArgumentError("motion duration must be positive");
  (void)profile;
  MotionClip clip;
  clip.category = std::string(category);
  clip.fps = kMotionFps;
  clip.duration = duration;
  clip.frame_count = std::max(1, static_cast<int>(std::lround(duration * kMotionFps)));

  ClipBuilder builder(rng, options.amplitude_scale);
  builder.root.start_xy = options.start_xy;
  builder.root.ground_z = options.ground_z;
  builder.root.start_yaw = builder.uniform(-kPi, kPi);
  build_template(cat, builder, options.amplitude_scale);
  clip.root = builder.root;
  clip.tracks = builder.take_tracks();
  return clip;
}

JointRotations joint_rotations_at(const MotionClip& clip, int frame) {
  const double t = clip.time_of(frame);
  const double s = clip.progress_of(frame);
  std::array<std::array<double, 3>, kJointCount> angles{};
  for (const auto& track : clip.tracks) {
    angles[track.joint][static_cast<int>(track.axis)] = track.at(t, s);
  }
  JointRotations out = identity_rotations();
  for (int j = 0; j < static_cast<int>(kJointCount); ++j) {
    if (j == index_of(Joint::kNeck)) continue;
    out[j] = joint_rotation(j, angles[j][0], angles[j][1], angles[j][2]);
  }
  return out;
}

RootState root_state_at(const MotionClip& clip, int frame) {
  const RootTrack& r = clip.root;
  auto yaw_at = [&](int k) {
    return r.start_yaw + r.total_yaw * clip.progress_of(k) + waves_at(r.yaw_waves, clip.time_of(k));
  };
  RootState st;
  st.xy = r.start_xy;
  const double dt = 1.0 / clip.fps;
  for (int k = 0; k < frame; ++k) {
    const double yaw = yaw_at(k);
    st.xy += dt * Eigen::Rotation2Dd(yaw).toRotationMatrix() * r.velocity;
  }
  const double t = clip.time_of(frame);
  const double s = ease(clip.progress_of(frame));
  st.yaw = yaw_at(frame);
  st.lean = r.lean_start + (r.lean_end - r.lean_start) * s + waves_at(r.lean_waves, t);
  st.side = r.side_start + (r.side_end - r.side_start) * s + waves_at(r.side_waves, t);
  st.spin = r.spin_start + (r.spin_end - r.spin_start) * clip.progress_of(frame);
  if (r.jump_height > 0.0 && r.jump_period > 0.0) {
    const double phi = t / r.jump_period - std::floor(t / r.jump_period);
    st.jump = 4.0 * r.jump_height * phi * (1.0 - phi);
  }
  return st;
}

BodyState pose_frame(const MotionClip& clip, int frame, const CharacterProfile& profile) {
  if (frame < 0 || frame >= clip.frame_count) {
    throw std::out_of_range("frame " + std::to_string(frame) + " outside clip of " +
                            std::to_string(clip.frame_count) + " frames");
  }
  const RootState root = root_state_at(clip, frame);
  const JointRotations local = joint_rotations_at(clip, frame);
  const Eigen::Matrix3d rot = root.rotation();
  BodyState body = forward_kinematics(profile, local, rot, Eigen::Vector3d(root.xy.x(), root.xy.y(), 0.0));
  const double lift = clip.root.ground_z + root.jump - lowest_vertex(body, profile);
  return forward_kinematics(profile, local, rot,
                            Eigen::Vector3d(root.xy.x(), root.xy.y(), lift));
}

Pose3D fk_pose(const MotionClip& clip, int frame, const CharacterProfile& profile) {
  return pose_frame(clip, frame, profile).pose;
}

}  // namespace uego
