// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "uego/nn/tensor.hpp"

namespace uego::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments over a fixed parameter list.
template <typename T>
class Adam {
 public:
  Adam(ParameterList<T> params, AdamConfig config = {});
  void step(double learning_rate);
  long steps() const { return t_; }
  const ParameterList<T>& parameters() const { return params_; }

 private:
  ParameterList<T> params_;
  AdamConfig config_;
  std::vector<Vector<T>> m_;
  std::vector<Vector<T>> v_;
  long t_ = 0;
};

}  // namespace uego::nn
