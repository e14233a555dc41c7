// Copyright (C) 2026 uego contributors
// SPDX-License-Identifier: Apache-2.0

#include "uego/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "uego/core/error.hpp"

namespace uego::nn {

double relative_error(double analytic, double numeric, double absolute_floor) {
  const double scale = std::max(std::abs(analytic), std::abs(numeric));
  if (scale < absolute_floor) return 0.0;
  return std::abs(analytic - numeric) / scale;
}

GradCheckResult check_gradients(ParameterList<double>& params, const std::function<double(bool)>& evaluate,
                                std::mt19937_64& rng, const GradCheckOptions& options) {
  if (params.size() == 0) throw ArgumentError("gradient check: no parameters");
  params.zero_grad();
  evaluate(true);

  std::vector<std::pair<std::size_t, Eigen::Index>> slots;
  for (std::size_t p = 0; p < params.items().size(); ++p) {
    for (Eigen::Index i = 0; i < params.items()[p]->size(); ++i) slots.emplace_back(p, i);
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  // Visit every parameter tensor before repeating one.
  std::stable_partition(slots.begin(), slots.end(), [&, seen = std::vector<bool>(params.size(), false)](
                                                        const auto& s) mutable {
    if (seen[s.first]) return false;
    seen[s.first] = true;
    return true;
  });

  GradCheckResult result;
  const int n = std::min<int>(options.probes, static_cast<int>(slots.size()));
  for (int k = 0; k < n; ++k) {
    auto& param = *params.items()[slots[static_cast<std::size_t>(k)].first];
    const Eigen::Index i = slots[static_cast<std::size_t>(k)].second;
    const double original = param.value[i];
    param.value[i] = original + options.step;
    const double up = evaluate(false);
    param.value[i] = original - options.step;
    const double down = evaluate(false);
    param.value[i] = original;
    const double numeric = (up - down) / (2.0 * options.step);
    const double err = relative_error(param.grad[i], numeric, options.absolute_floor);
    ++result.probes;
    if (err > options.tolerance) ++result.failures;
    if (err >= result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_parameter = param.name + "[" + std::to_string(i) + "]";
      result.worst_analytic = param.grad[i];
      result.worst_numeric = numeric;
    }
  }
  return result;
}

}  // namespace uego::nn
