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

// Feedforward stacks (affine + tanh, final layer affine) and softmax.

#pragma once

#include <cmath>
#include <span>
#include <concepts>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "combvisa/nn/tensor.hpp"

namespace combvisa::nn {

struct Affine {
  Matrix W;  // out x in
  Vector b;
};

struct Mlp {
  std::vector<Affine> layers;

  /// widths = {in, hidden..., out}; needs at least two entries.
  static Mlp zeros(std::span<const Index> widths) {
    if (widths.size() < 2) throw ShapeError("an MLP needs at least input and output widths");
    Mlp m;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      m.layers.push_back({Matrix::Zero(widths[l + 1], widths[l]), Vector::Zero(widths[l + 1])});
    }
    return m;
  }
  static Mlp zeros(std::initializer_list<Index> widths) {
    return zeros(std::span<const Index>(widths.begin(), widths.size()));
  }

  Index in_dim() const { return layers.empty() ? 0 : layers.front().W.cols(); }
  Index out_dim() const { return layers.empty() ? 0 : layers.back().W.rows(); }
};

template <class F, class... M>
  requires(std::same_as<std::remove_const_t<M>, Mlp> && ...)
void for_each_tensor(F&& f, const std::string& prefix, M&... m) {
  const auto& first = std::get<0>(std::tie(m...));
  for (std::size_t l = 0; l < first.layers.size(); ++l) {
    f(prefix + std::to_string(l) + ".W", m.layers[l].W...);
    f(prefix + std::to_string(l) + ".b", m.layers[l].b...);
  }
}

/// Inputs to each layer; `inputs[l + 1]` is the tanh output of hidden layer l.
struct MlpTrace {
  std::vector<Vector> inputs;
  Vector output;
};

inline Vector mlp_forward(const Mlp& mlp, const Vector& v, MlpTrace* trace = nullptr) {
  if (mlp.layers.empty()) throw ShapeError("empty MLP");
  expect_size(v, mlp.in_dim(), "mlp input");
  Vector a = v;
  if (trace) trace->inputs.assign(1, v);
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    Vector z = mlp.layers[l].W * a + mlp.layers[l].b;
    if (l + 1 < mlp.layers.size()) {
      a = tanh(z);
      if (trace) trace->inputs.push_back(a);
    } else {
      a = std::move(z);
    }
  }
  if (trace) trace->output = a;
  return a;
}

/// Adds parameter gradients to `grad`; returns d(loss)/d(input).
inline Vector mlp_backward(const Mlp& mlp, const MlpTrace& trace, const Vector& d_out, Mlp& grad) {
  Vector delta = d_out;
  for (std::size_t l = mlp.layers.size(); l-- > 0;) {
    if (l + 1 < mlp.layers.size()) {
      delta = delta.cwiseProduct((1.0 - trace.inputs[l + 1].array().square()).matrix());
    }
    grad.layers[l].W.noalias() += delta * trace.inputs[l].transpose();
    grad.layers[l].b += delta;
    delta = mlp.layers[l].W.transpose() * delta;
  }
  return delta;
}

/// Max-shifted softmax.
inline Vector softmax(const Vector& logits) {
  if (logits.size() == 0) throw ShapeError("softmax of an empty vector");
  const Vector e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

inline double log_sum_exp(const Vector& logits) {
  const double m = logits.maxCoeff();
  return m + std::log((logits.array() - m).exp().sum());
}

}  // namespace combvisa::nn
