// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "uego/core/error.hpp"
#include "uego/core/frame_record.hpp"
#include "uego/core/hashing.hpp"
#include "uego/core/heatmap.hpp"
#include "uego/core/image.hpp"
#include "uego/core/manifest.hpp"
#include "uego/core/pose.hpp"
#include "uego/core/skeleton.hpp"
#include "uego/core/tensor_io.hpp"
#include "test_support.hpp"

using namespace uego;

TEST_CASE("topology has 16 joints, 15 heatmap joints and 15 bones") {
  const auto& t = build_topology();
  CHECK(t.joint_names.size() == 16);
  CHECK(t.heatmap_subset.size() == 15);
  CHECK(t.bones.size() == 15);
  CHECK(is_valid_tree(t));
  CHECK(t.root() == index_of(Joint::kNeck));
  CHECK(t.heatmap_channel(index_of(Joint::kHead)) == -1);
  std::set<int> subset(t.heatmap_subset.begin(), t.heatmap_subset.end());
  CHECK(subset.size() == 15);
  CHECK(subset.count(index_of(Joint::kHead)) == 0);

  std::vector<int> child_seen(16, 0);
  for (const Bone& b : t.bones) ++child_seen[b.child];
  for (int j = 0; j < 16; ++j) CHECK(child_seen[j] == (j == t.root() ? 0 : 1));
}

TEST_CASE("topology checksum is stable and sensitive to ordering") {
  const auto& t = build_topology();
  CHECK(t.checksum() == build_topology().checksum());
  SkeletonTopology swapped = t;
  std::swap(swapped.joint_names[2], swapped.joint_names[3]);
  CHECK(swapped.checksum() != t.checksum());
}

TEST_CASE("a cyclic parent table is not a tree") {
  SkeletonTopology t = build_topology();
  t.parent_index[index_of(Joint::kNeck)] = index_of(Joint::kHead);
  CHECK_FALSE(is_valid_tree(t));
}

TEST_CASE("joint names resolve") {
  CHECK(joint_from_name("foot_l") == index_of(Joint::kFootL));
  CHECK(joint_from_name("tail") == -1);
}

TEST_CASE("pose helpers") {
  Pose3D p;
  p.set_joint(index_of(Joint::kThighL), {2, 0, 0});
  p.set_joint(index_of(Joint::kThighR), {4, 2, 0});
  CHECK(p.pelvis().isApprox(Eigen::Vector3d(3, 1, 0)));
  CHECK(p.is_finite());
  p.joints(0, 0) = std::nan("");
  CHECK_FALSE(p.is_finite());
  CHECK(parse_pose_frame(to_string(PoseFrame::kPelvis)) == PoseFrame::kPelvis);
}

TEST_CASE("heatmap stack rejects mismatched data") {
  CHECK_THROWS_AS(HeatmapStack(4, std::vector<float>(10)), ArgumentError);
  HeatmapStack h(4);
  h.at(3, 2, 1) = 5.0f;
  CHECK(h.channel(3)[2 * 4 + 1] == 5.0f);
}

TEST_CASE("frame record round trip") {
  const FrameRecord r = test::sample_record();
  const FrameRecord back = frame_record_from_json(to_json_value(r));
  CHECK(back == r);

  test::TempDir dir;
  save_frame_record(r, dir.path() / "x.meta");
  CHECK(load_frame_record(dir.path() / "x.meta") == r);
}

TEST_CASE("frame record missing a camera pose loads as absent") {
  FrameRecord r = test::sample_record();
  auto j = to_json_value(r);
  j["camera_poses"].erase("right");
  const FrameRecord back = frame_record_from_json(j);
  CHECK(back.left_camera_pose.has_value());
  CHECK_FALSE(back.right_camera_pose.has_value());
}

TEST_CASE("malformed frame record is a data error") {
  CHECK_THROWS_AS(frame_record_from_json(nlohmann::json{{"frame_id", "x"}}), DataError);
  test::TempDir dir;
  CHECK_THROWS_AS(load_frame_record(dir.path() / "absent.meta"), DataError);
}

TEST_CASE("manifest round trip") {
  DatasetManifest m;
  m.split = Split::kVal;
  m.seed = 0xfedcba9876543210ULL;
  m.config_hash = "abc";
  m.topology_checksum = build_topology().checksum();
  m.clips.push_back(ClipEntry{"m00001", "jumping", 3, 2, {"val/m00001/frame_0.meta", "val/m00001/frame_1.meta"}});
  CHECK(manifest_from_json(to_json_value(m)) == m);
  CHECK(m.frame_count() == 2);

  test::TempDir dir;
  save_manifest(m, manifest_path(dir.path(), m.split));
  CHECK(load_manifest(manifest_path(dir.path(), m.split), dir.path(), false) == m);
  CHECK_THROWS_AS(load_manifest(manifest_path(dir.path(), m.split), dir.path(), true), DataError);
  CHECK(manifest_path(dir.path(), Split::kTest).filename() == "manifest.test");
}

TEST_CASE("split sizes follow the ratios") {
  std::mt19937_64 rng(3);
  const auto s = split_motions(100, {0.8, 0.1, 0.1}, rng);
  CHECK(s.train.size() == 80);
  CHECK(s.val.size() == 10);
  CHECK(s.test.size() == 10);
  CHECK_THROWS_AS(split_motions(10, {0.5, 0.1, 0.1}, rng), ArgumentError);
}

TEST_CASE("splits are disjoint and cover every motion") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 7 + static_cast<int>(seed % 40);
    const auto s = split_motions(n, {0.7, 0.2, 0.1}, rng);
    std::set<int> all;
    std::size_t total = 0;
    for (Split sp : kAllSplits) {
      total += s.of(sp).size();
      all.insert(s.of(sp).begin(), s.of(sp).end());
    }
    CHECK(total == static_cast<std::size_t>(n));
    CHECK(all.size() == static_cast<std::size_t>(n));
  }
}

TEST_CASE("tensor container round trip") {
  const std::vector<float> values = {1.5f, -2.0f, 3.25f, 0.0f, 7.0f, 8.0f};
  const auto t = StoredTensor::from_floats({2, 3}, values);
  std::stringstream ss;
  write_tensor(ss, t);
  const auto back = read_tensor(ss);
  CHECK(back == t);
  CHECK(back.to_floats() == values);

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_tensor(bad), DataError);
  CHECK_THROWS_AS(StoredTensor::from_floats({4}, values), ArgumentError);
}

TEST_CASE("png round trip") {
  RgbImage img(5, 3);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 7);
  test::TempDir dir;
  write_png(img, dir.path() / "a.png");
  CHECK(read_png(dir.path() / "a.png") == img);
  CHECK_THROWS_AS(read_png(dir.path() / "missing.png"), DataError);
}

TEST_CASE("fnv hash known value") {
  // Reference value of 64-bit FNV-1a for "a".
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(to_hex(0x1fULL) == "000000000000001f");
}
