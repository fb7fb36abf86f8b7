// Copyright 2026 The CombViSA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Finite-difference verification of analytic gradients.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "combvisa/nn/model.hpp"

namespace combvisa::nn {

struct GradCheckOptions {
  double epsilon = 1e-5;
  /// Check every coordinate when the model has at most this many; otherwise
  /// a seeded random subsample of `sample_size` coordinates.
  std::size_t exhaustive_limit = 20000;
  std::size_t sample_size = 2000;
  std::uint64_t seed = 0;
  /// A coordinate is flagged when it misses both tolerances.
  double flag_relative = 1e-4;
  double flag_absolute = 1e-10;
};

struct GradCheckReport {
  std::size_t coordinates = 0;
  double max_relative_error = 0.0;
  std::string worst_tensor;
  Index worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t flagged = 0;

  std::string to_text() const {
    return fmt::format(
        "coordinates={}\nmax_relative_error={:.6e}\nworst_tensor={}\nworst_index={}\n"
        "worst_analytic={:.12e}\nworst_numeric={:.12e}\nflagged={}\n",
        coordinates, max_relative_error, worst_tensor, worst_index, worst_analytic,
        worst_numeric, flagged);
  }
};

/// |a - n| / max(|a|, |n|, 1e-8)
inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

/// Compares `analytic` (same shape as `model`) with central differences of
/// `loss()`. `visit(f, model, analytic)` must call f(name, param, grad) for
/// every tensor pair. `model` is perturbed in place and restored exactly.
template <class Model, class Visit, class LossFn>
GradCheckReport grad_check(Model& model, const Model& analytic, Visit&& visit, LossFn&& loss,
                           const GradCheckOptions& opts = {}) {
  struct Coord {
    std::string tensor;
    double* value;
    double grad;
    Index index;
  };
  std::vector<Coord> coords;
  visit(
      [&](const std::string& name, auto& param, const auto& grad) {
        for (Index k = 0; k < param.size(); ++k) {
          coords.push_back({name, param.data() + k, grad.data()[k], k});
        }
      },
      model, analytic);

  if (coords.size() > opts.exhaustive_limit) {
    Rng rng(opts.seed);
    const std::size_t keep = std::max<std::size_t>(opts.sample_size, 200);
    for (std::size_t i = 0; i < keep && i < coords.size(); ++i) {
      std::swap(coords[i], coords[i + rng.below(coords.size() - i)]);
    }
    coords.resize(std::min(keep, coords.size()));
  }

  GradCheckReport report;
  report.coordinates = coords.size();
  report.max_relative_error = 0.0;
  for (const auto& c : coords) {
    const double saved = *c.value;
    *c.value = saved + opts.epsilon;
    const double up = loss();
    *c.value = saved - opts.epsilon;
    const double down = loss();
    *c.value = saved;
    const double numeric = (up - down) / (2.0 * opts.epsilon);
    const double err = relative_error(c.grad, numeric);
    if (err >= opts.flag_relative && std::abs(c.grad - numeric) >= opts.flag_absolute) {
      ++report.flagged;
    }
    if (err > report.max_relative_error || report.worst_tensor.empty()) {
      report.max_relative_error = err;
      report.worst_tensor = c.tensor;
      report.worst_index = c.index;
      report.worst_analytic = c.grad;
      report.worst_numeric = numeric;
    }
  }
  return report;
}

/// Checks the cross-entropy gradient of one sample over all model tensors.
inline GradCheckReport grad_check(CombVisaModel& model, const Sample& sample,
                                  const GradCheckOptions& opts = {}) {
  CombVisaModel grad = model.zeros_like();
  loss_and_gradient(model, sample, grad);
  return grad_check(
      model, grad,
      [](auto&& f, CombVisaModel& m, const CombVisaModel& g) { for_each_tensor(f, m, g); },
      [&] { return sample_loss(model, sample); }, opts);
}

}  // namespace combvisa::nn
