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

// LSTM cell and sequence unrolling with backpropagation through time.
//
//   i = sigma(W_i x + U_i h' + b_i)     f = sigma(W_f x + U_f h' + b_f)
//   o = sigma(W_o x + U_o h' + b_o)     g = tanh(W_g x + U_g h' + b_g)
//   c = i * g + f * c'                  h = o * tanh(c)
//
// where h', c' are the previous state and '*' is elementwise.

#pragma once

#include <concepts>
#include <string>
#include <tuple>
#include <type_traits>
#include <vector>

#include "combvisa/nn/tensor.hpp"

namespace combvisa::nn {

struct LstmParams {
  Matrix W_i, W_f, W_o, W_g;  // hidden x input
  Matrix U_i, U_f, U_o, U_g;  // hidden x hidden
  Vector b_i, b_f, b_o, b_g;

  static LstmParams zeros(Index input_dim, Index hidden_dim) {
    LstmParams p;
    for (Matrix* w : {&p.W_i, &p.W_f, &p.W_o, &p.W_g}) *w = Matrix::Zero(hidden_dim, input_dim);
    for (Matrix* u : {&p.U_i, &p.U_f, &p.U_o, &p.U_g}) *u = Matrix::Zero(hidden_dim, hidden_dim);
    for (Vector* b : {&p.b_i, &p.b_f, &p.b_o, &p.b_g}) *b = Vector::Zero(hidden_dim);
    return p;
  }

  Index input_dim() const { return W_i.cols(); }
  Index hidden_dim() const { return W_i.rows(); }
};

/// Visits every tensor of one or more same-shaped LstmParams in a fixed order.
template <class F, class... P>
  requires(std::same_as<std::remove_const_t<P>, LstmParams> && ...)
void for_each_tensor(F&& f, const std::string& prefix, P&... p) {
  f(prefix + "W_i", p.W_i...);
  f(prefix + "U_i", p.U_i...);
  f(prefix + "b_i", p.b_i...);
  f(prefix + "W_f", p.W_f...);
  f(prefix + "U_f", p.U_f...);
  f(prefix + "b_f", p.b_f...);
  f(prefix + "W_o", p.W_o...);
  f(prefix + "U_o", p.U_o...);
  f(prefix + "b_o", p.b_o...);
  f(prefix + "W_g", p.W_g...);
  f(prefix + "U_g", p.U_g...);
  f(prefix + "b_g", p.b_g...);
}

struct LstmState {
  Vector h;
  Vector c;

  static LstmState zeros(Index hidden_dim) {
    return {Vector::Zero(hidden_dim), Vector::Zero(hidden_dim)};
  }
};

/// Everything the backward pass needs from one step.
struct LstmStep {
  Vector x, h_prev, c_prev;
  Vector i, f, o, g;
  Vector c, tanh_c, h;
};

inline LstmStep lstm_step(const LstmParams& p, const Vector& x, const LstmState& prev) {
  expect_size(x, p.input_dim(), "lstm input");
  expect_size(prev.h, p.hidden_dim(), "lstm hidden state");
  expect_size(prev.c, p.hidden_dim(), "lstm cell state");
  LstmStep s;
  s.x = x;
  s.h_prev = prev.h;
  s.c_prev = prev.c;
  s.i = sigmoid(p.W_i * x + p.U_i * prev.h + p.b_i);
  s.f = sigmoid(p.W_f * x + p.U_f * prev.h + p.b_f);
  s.o = sigmoid(p.W_o * x + p.U_o * prev.h + p.b_o);
  s.g = tanh(p.W_g * x + p.U_g * prev.h + p.b_g);
  s.c = s.i.cwiseProduct(s.g) + s.f.cwiseProduct(prev.c);
  s.tanh_c = tanh(s.c);
  s.h = s.o.cwiseProduct(s.tanh_c);
  return s;
}

inline LstmState lstm_cell_forward(const LstmParams& p, const Vector& x, const LstmState& prev) {
  auto s = lstm_step(p, x, prev);
  return {std::move(s.h), std::move(s.c)};
}

/// Steps in processing order, starting from the zero state.
struct LstmTrace {
  std::vector<LstmStep> steps;

  const Vector& hidden(std::size_t k) const { return steps[k].h; }
};

/// Runs the cell over the rows of `inputs` (T x input_dim) top to bottom.
inline LstmTrace lstm_forward(const LstmParams& p, const Matrix& inputs) {
  if (inputs.cols() != p.input_dim()) {
    throw ShapeError(fmt::format("lstm input width {} != {}", inputs.cols(), p.input_dim()));
  }
  LstmTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(inputs.rows()));
  LstmState state = LstmState::zeros(p.hidden_dim());
  for (Index t = 0; t < inputs.rows(); ++t) {
    trace.steps.push_back(lstm_step(p, inputs.row(t).transpose(), state));
    state.h = trace.steps.back().h;
    state.c = trace.steps.back().c;
  }
  return trace;
}

/// Backpropagation through time. `d_hidden` (T x hidden) holds the loss
/// gradient w.r.t. each step's output h. Parameter gradients are added to
/// `grad`; returns the gradient w.r.t. the inputs (T x input_dim).
inline Matrix lstm_backward(const LstmParams& p, const LstmTrace& trace, const Matrix& d_hidden,
                            LstmParams& grad) {
  const Index steps = static_cast<Index>(trace.steps.size());
  Matrix d_inputs = Matrix::Zero(steps, p.input_dim());
  Vector dh_next = Vector::Zero(p.hidden_dim());
  Vector dc_next = Vector::Zero(p.hidden_dim());
  for (Index t = steps - 1; t >= 0; --t) {
    const auto& s = trace.steps[static_cast<std::size_t>(t)];
    const Vector dh = d_hidden.row(t).transpose() + dh_next;
    const Vector dc =
        dh.cwiseProduct(s.o).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix()) + dc_next;

    const Vector dz_i = dc.cwiseProduct(s.g).array() * s.i.array() * (1.0 - s.i.array());
    const Vector dz_f = dc.cwiseProduct(s.c_prev).array() * s.f.array() * (1.0 - s.f.array());
    const Vector dz_o = dh.cwiseProduct(s.tanh_c).array() * s.o.array() * (1.0 - s.o.array());
    const Vector dz_g = dc.cwiseProduct(s.i).array() * (1.0 - s.g.array().square());

    grad.W_i.noalias() += dz_i * s.x.transpose();
    grad.W_f.noalias() += dz_f * s.x.transpose();
    grad.W_o.noalias() += dz_o * s.x.transpose();
    grad.W_g.noalias() += dz_g * s.x.transpose();
    grad.U_i.noalias() += dz_i * s.h_prev.transpose();
    grad.U_f.noalias() += dz_f * s.h_prev.transpose();
    grad.U_o.noalias() += dz_o * s.h_prev.transpose();
    grad.U_g.noalias() += dz_g * s.h_prev.transpose();
    grad.b_i += dz_i;
    grad.b_f += dz_f;
    grad.b_o += dz_o;
    grad.b_g += dz_g;

    d_inputs.row(t) = (p.W_i.transpose() * dz_i + p.W_f.transpose() * dz_f +
                       p.W_o.transpose() * dz_o + p.W_g.transpose() * dz_g)
                          .transpose();
    dh_next = p.U_i.transpose() * dz_i + p.U_f.transpose() * dz_f + p.U_o.transpose() * dz_o +
              p.U_g.transpose() * dz_g;
    dc_next = dc.cwiseProduct(s.f);
  }
  return d_inputs;
}

}  // namespace combvisa::nn
