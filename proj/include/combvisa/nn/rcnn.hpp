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

// Recurrent convolutional encoder.
//
// For each position t of an SL x h input:
//   left context  cl_t = forward-LSTM state after rows 0..t-1 (zero at t = 0)
//   right context cr_t = backward-LSTM state after rows SL-1..t+1 (zero at the end)
//   a_t = tanh(W [cl_t ; x_t ; cr_t] + b)      (width-1 convolution)
// and the output is the coordinate-wise max of a_t over positions.

#pragma once

#include <string>
#include <vector>

#include "combvisa/nn/lstm.hpp"

namespace combvisa::nn {

struct RcnnModel {
  LstmParams forward_lstm;
  LstmParams backward_lstm;
  Matrix conv_W;  // filters x (2 * hidden + input)
  Vector conv_b;

  static RcnnModel zeros(Index input_dim, Index hidden_dim, Index filters) {
    return {LstmParams::zeros(input_dim, hidden_dim), LstmParams::zeros(input_dim, hidden_dim),
            Matrix::Zero(filters, 2 * hidden_dim + input_dim), Vector::Zero(filters)};
  }

  Index input_dim() const { return forward_lstm.input_dim(); }
  Index hidden_dim() const { return forward_lstm.hidden_dim(); }
  Index filters() const { return conv_W.rows(); }
};

template <class F, class... R>
  requires(std::same_as<std::remove_const_t<R>, RcnnModel> && ...)
void for_each_tensor(F&& f, const std::string& prefix, R&... r) {
  for_each_tensor(f, prefix + "fwd.", r.forward_lstm...);
  for_each_tensor(f, prefix + "bwd.", r.backward_lstm...);
  f(prefix + "conv.W", r.conv_W...);
  f(prefix + "conv.b", r.conv_b...);
}

struct RcnnTrace {
  LstmTrace forward;   // processing order = positions 0..SL-1
  LstmTrace backward;  // processing order = positions SL-1..0
  Matrix context;      // SL x (2 * hidden + input), rows [cl_t ; x_t ; cr_t]
  Matrix activations;  // SL x filters
  std::vector<Index> argmax;
  Vector pooled;
};

inline Vector rcnn_forward(const RcnnModel& m, const Matrix& X, RcnnTrace* trace = nullptr) {
  const Index sl = X.rows();
  const Index hid = m.hidden_dim();
  if (sl == 0) throw ShapeError("rcnn input has no rows");
  if (X.cols() != m.input_dim()) {
    throw ShapeError(fmt::format("rcnn input width {} != {}", X.cols(), m.input_dim()));
  }
  RcnnTrace local;
  RcnnTrace& tr = trace ? *trace : local;
  tr.forward = lstm_forward(m.forward_lstm, X);
  const Matrix reversed = X.colwise().reverse();
  tr.backward = lstm_forward(m.backward_lstm, reversed);

  tr.context = Matrix::Zero(sl, 2 * hid + X.cols());
  for (Index t = 0; t < sl; ++t) {
    if (t > 0) tr.context.row(t).head(hid) = tr.forward.hidden(t - 1).transpose();
    tr.context.row(t).segment(hid, X.cols()) = X.row(t);
    if (t + 1 < sl) {
      tr.context.row(t).tail(hid) =
          tr.backward.hidden(static_cast<std::size_t>(sl - 2 - t)).transpose();
    }
  }
  tr.activations = ((tr.context * m.conv_W.transpose()).rowwise() + m.conv_b.transpose())
                       .array()
                       .tanh()
                       .matrix();
  tr.argmax.assign(static_cast<std::size_t>(m.filters()), 0);
  tr.pooled = Vector(m.filters());
  for (Index k = 0; k < m.filters(); ++k) {
    Index best = 0;
    tr.pooled[k] = tr.activations.col(k).maxCoeff(&best);
    tr.argmax[static_cast<std::size_t>(k)] = best;
  }
  return tr.pooled;
}

/// Adds parameter gradients to `grad`; returns d(loss)/dX.
inline Matrix rcnn_backward(const RcnnModel& m, const RcnnTrace& tr, const Vector& d_pooled,
                            RcnnModel& grad) {
  const Index sl = tr.context.rows();
  const Index hid = m.hidden_dim();
  const Index in = m.input_dim();

  // Max pooling routes each filter's gradient to its winning position.
  Matrix d_pre = Matrix::Zero(sl, m.filters());
  for (Index k = 0; k < m.filters(); ++k) {
    const Index t = tr.argmax[static_cast<std::size_t>(k)];
    const double a = tr.activations(t, k);
    d_pre(t, k) = d_pooled[k] * (1.0 - a * a);
  }
  grad.conv_W.noalias() += d_pre.transpose() * tr.context;
  grad.conv_b += d_pre.colwise().sum().transpose();
  const Matrix d_context = d_pre * m.conv_W;

  Matrix d_fwd = Matrix::Zero(sl, hid);
  Matrix d_bwd = Matrix::Zero(sl, hid);
  for (Index t = 0; t < sl; ++t) {
    if (t > 0) d_fwd.row(t - 1) += d_context.row(t).head(hid);
    if (t + 1 < sl) d_bwd.row(sl - 2 - t) += d_context.row(t).tail(hid);
  }
  Matrix dX = d_context.middleCols(hid, in);
  dX += lstm_backward(m.forward_lstm, tr.forward, d_fwd, grad.forward_lstm);
  dX += lstm_backward(m.backward_lstm, tr.backward, d_bwd, grad.backward_lstm).colwise().reverse();
  return dX;
}

}  // namespace combvisa::nn
