// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/adam.hpp"

#include <cmath>

#include "uego/core/error.hpp"

namespace uego::nn {

template <typename T>
Adam<T>::Adam(ParameterList<T> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0 && config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw ArgumentError("Adam moments must lie in [0, 1)");
  }
  for (const auto& p : params_.items()) {
    m_.push_back(Vector<T>::Zero(p->size()));
    v_.push_back(Vector<T>::Zero(p->size()));
  }
}

template <typename T>
void Adam<T>::step(double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const T b1 = static_cast<T>(config_.beta1);
  const T b2 = static_cast<T>(config_.beta2);
  const T step = static_cast<T>(lr / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T eps = static_cast<T>(config_.epsilon);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = *params_.items()[i];
    m_[i] = b1 * m_[i] + (T(1) - b1) * p.grad;
    v_[i] = b2 * v_[i] + (T(1) - b2) * p.grad.cwiseAbs2();
    p.value.array() -= step * m_[i].array() / ((v_[i].array() * inv_c2).sqrt() + eps);
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace uego::nn
