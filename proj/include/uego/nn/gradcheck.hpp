// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <random>
#include <string>

#include "uego/nn/tensor.hpp"

namespace uego::nn {

struct GradCheckOptions {
  int probes = 100;
  double step = 1e-6;
  double tolerance = 1e-4;
  /// Pairs whose gradients are both below this magnitude count as agreeing.
  double absolute_floor = 1e-9;
};

struct GradCheckResult {
  int probes = 0;
  int failures = 0;
  double max_relative_error = 0.0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  bool ok() const { return probes > 0 && failures == 0; }
};

/// `evaluate(true)` must zero nothing, run forward and backward and leave the
/// analytic gradient in the parameters; `evaluate(false)` only returns the loss.
GradCheckResult check_gradients(ParameterList<double>& params, const std::function<double(bool)>& evaluate,
                                std::mt19937_64& rng, const GradCheckOptions& options = {});

double relative_error(double analytic, double numeric, double absolute_floor);

}  // namespace uego::nn
