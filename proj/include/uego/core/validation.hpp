// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "uego/core/frame_record.hpp"

namespace uego {

class StereoRig;

enum class ValidationStatus { kOk, kResidualExceeded, kMissingField, kInconsistentPose };

struct ValidationReport {
  ValidationStatus status = ValidationStatus::kOk;
  double max_residual_px = 0.0;
  std::vector<std::string> issues;

  bool ok() const { return status == ValidationStatus::kOk; }
};

inline constexpr double kReprojectionTolerancePx = 0.5;

/// Reprojects joints_device through the rig and compares with the stored
/// keypoints. Also checks that each stored camera pose maps joints_world onto
/// joints_device the same way the rig does.
ValidationReport validate_frame(const FrameRecord& record, const StereoRig& rig,
                                double tolerance_px = kReprojectionTolerancePx);

/// Loads and validates; parse failures come back as kMissingField.
ValidationReport validate_frame_file(const std::filesystem::path& path, const StereoRig& rig,
                                     double tolerance_px = kReprojectionTolerancePx);

}  // namespace uego
