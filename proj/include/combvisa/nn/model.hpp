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

// The fused classifier: an encoder over the contextual matrix produces
// LMVec, a feedforward head over PosVec ++ NegVec produces SWVec, and a
// fusion MLP with softmax classifies LMVec ++ SWVec.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "combvisa/embeddings.hpp"
#include "combvisa/nn/lstm.hpp"
#include "combvisa/nn/mlp.hpp"
#include "combvisa/nn/rcnn.hpp"
#include "combvisa/sentivec.hpp"

namespace combvisa::nn {

enum class EncoderKind {
  lstm,  // final state of a single forward LSTM
  rcnn,
};

struct ModelConfig {
  EncoderKind encoder = EncoderKind::rcnn;
  bool use_sentivec = true;
  Index input_dim = 768;
  Index lstm_hidden = 64;
  Index filters = 64;
  Index d_lm = 64;
  Index d_sw = 64;
  std::vector<Index> lm_hidden;
  std::vector<Index> sw_hidden;
  std::vector<Index> fusion_hidden{64};
  Index senti_len = 128;
  Index class_count = 3;

  void validate() const {
    if (class_count != 2 && class_count != 3) {
      throw ConfigError(fmt::format("class_count must be 2 or 3, got {}", class_count));
    }
    for (Index w : {input_dim, lstm_hidden, filters, d_lm, d_sw, senti_len}) {
      if (w < 1) throw ConfigError("all model widths must be >= 1");
    }
    for (const auto* v : {&lm_hidden, &sw_hidden, &fusion_hidden})
      for (Index w : *v)
        if (w < 1) throw ConfigError("all model widths must be >= 1");
  }

  Index encoder_out() const { return encoder == EncoderKind::rcnn ? filters : lstm_hidden; }
  Index fusion_in() const { return d_lm + (use_sentivec ? d_sw : 0); }

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Named architecture presets used by the experiment harness.
inline ModelConfig apply_variant(ModelConfig cfg, std::string_view variant) {
  if (variant == "static+lstm") {
    cfg.encoder = EncoderKind::lstm;
    cfg.use_sentivec = false;
  } else if (variant == "rcnn-only") {
    cfg.encoder = EncoderKind::rcnn;
    cfg.use_sentivec = false;
  } else if (variant == "rcnn+sentivec") {
    cfg.encoder = EncoderKind::rcnn;
    cfg.use_sentivec = true;
  } else {
    throw ConfigError(fmt::format(
        "unknown model variant '{}' (expected static+lstm, rcnn-only or rcnn+sentivec)", variant));
  }
  return cfg;
}

namespace detail {

inline std::vector<Index> widths(Index in, const std::vector<Index>& hidden, Index out) {
  std::vector<Index> w{in};
  w.insert(w.end(), hidden.begin(), hidden.end());
  w.push_back(out);
  return w;
}

}  // namespace detail

/// Parameters of the whole classifier. Parts unused by the configured
/// architecture are left empty and are skipped by for_each_tensor.
struct CombVisaModel {
  ModelConfig config;
  LstmParams lstm;
  RcnnModel rcnn;
  Mlp lm_head;
  Mlp sw_head;
  Mlp fusion;

  static CombVisaModel zeros(const ModelConfig& cfg) {
    cfg.validate();
    CombVisaModel m;
    m.config = cfg;
    if (cfg.encoder == EncoderKind::lstm) {
      m.lstm = LstmParams::zeros(cfg.input_dim, cfg.lstm_hidden);
    } else {
      m.rcnn = RcnnModel::zeros(cfg.input_dim, cfg.lstm_hidden, cfg.filters);
    }
    m.lm_head = Mlp::zeros(detail::widths(cfg.encoder_out(), cfg.lm_hidden, cfg.d_lm));
    if (cfg.use_sentivec) {
      m.sw_head = Mlp::zeros(detail::widths(2 * cfg.senti_len, cfg.sw_hidden, cfg.d_sw));
    }
    m.fusion = Mlp::zeros(detail::widths(cfg.fusion_in(), cfg.fusion_hidden, cfg.class_count));
    return m;
  }

  /// Same architecture, all parameters zero. Used for gradient buffers.
  CombVisaModel zeros_like() const { return zeros(config); }
};

template <class F, class... M>
  requires(std::same_as<std::remove_const_t<M>, CombVisaModel> && ...)
void for_each_tensor(F&& f, M&... m) {
  const auto& first = std::get<0>(std::tie(m...));
  if (first.config.encoder == EncoderKind::lstm) {
    for_each_tensor(f, "lstm.", m.lstm...);
  } else {
    for_each_tensor(f, "rcnn.", m.rcnn...);
  }
  for_each_tensor(f, "lm_head.", m.lm_head...);
  if (first.config.use_sentivec) for_each_tensor(f, "sw_head.", m.sw_head...);
  for_each_tensor(f, "fusion.", m.fusion...);
}

inline std::size_t parameter_count(const CombVisaModel& m) {
  std::size_t n = 0;
  for_each_tensor([&](const std::string&, const auto& t) { n += static_cast<std::size_t>(t.size()); },
                  m);
  return n;
}

/// Uniform initialization in [-scale, scale], tensor by tensor in visit order.
inline void initialize_uniform(CombVisaModel& m, std::uint64_t seed, double scale = 0.08) {
  Rng rng(seed);
  for_each_tensor([&](const std::string&, auto& t) { fill_uniform(t, rng, scale); }, m);
}

inline void set_zero(CombVisaModel& m) {
  for_each_tensor([](const std::string&, auto& t) { t.setZero(); }, m);
}

struct Sample {
  EncoderOutput encoder;
  SentiVectors senti;
  int label = 0;
};

struct ForwardTrace {
  LstmTrace lstm;
  RcnnTrace rcnn;
  Vector features;
  MlpTrace lm, sw, fusion;
  Vector logits;
  Vector probs;
};

inline Vector senti_input(const ModelConfig& cfg, const SentiVectors& sv) {
  const auto len = static_cast<std::size_t>(cfg.senti_len);
  if (sv.pos_vec.size() != len || sv.neg_vec.size() != len) {
    throw ShapeError(fmt::format("sentivec length {}/{} != model L {}", sv.pos_vec.size(),
                                 sv.neg_vec.size(), len));
  }
  Vector v(2 * cfg.senti_len);
  for (std::size_t i = 0; i < len; ++i) {
    v[static_cast<Index>(i)] = sv.pos_vec[i];
    v[static_cast<Index>(len + i)] = sv.neg_vec[i];
  }
  return v;
}

/// Class logits; fills `trace` for a subsequent backward pass.
inline Vector combvisa_logits(const CombVisaModel& m, const EncoderOutput& enc,
                              const SentiVectors& sv, ForwardTrace& tr) {
  const auto& cfg = m.config;
  if (enc.matrix.rows() == 0) throw ShapeError("encoder output has no rows");
  if (cfg.encoder == EncoderKind::lstm) {
    if (enc.matrix.cols() != cfg.input_dim) {
      throw ShapeError(fmt::format("encoder width {} != {}", enc.matrix.cols(), cfg.input_dim));
    }
    tr.lstm = lstm_forward(m.lstm, enc.matrix);
    tr.features = tr.lstm.steps.back().h;
  } else {
    tr.features = rcnn_forward(m.rcnn, enc.matrix, &tr.rcnn);
  }
  const Vector lm_vec = mlp_forward(m.lm_head, tr.features, &tr.lm);
  Vector fused(cfg.fusion_in());
  fused.head(cfg.d_lm) = lm_vec;
  if (cfg.use_sentivec) {
    fused.tail(cfg.d_sw) = mlp_forward(m.sw_head, senti_input(cfg, sv), &tr.sw);
  }
  tr.logits = mlp_forward(m.fusion, fused, &tr.fusion);
  tr.probs = softmax(tr.logits);
  return tr.logits;
}

/// Class probabilities.
inline Vector combvisa_forward(const CombVisaModel& m, const EncoderOutput& enc,
                               const SentiVectors& sv) {
  ForwardTrace tr;
  combvisa_logits(m, enc, sv, tr);
  return tr.probs;
}

inline double cross_entropy(const Vector& logits, int label) {
  return log_sum_exp(logits) - logits[label];
}

inline void check_label(const CombVisaModel& m, int label) {
  if (label < 0 || label >= m.config.class_count) {
    throw DataError(fmt::format("label {} outside [0, {})", label, m.config.class_count));
  }
}

/// Cross-entropy of one sample; its gradient is added to `grad`.
inline double loss_and_gradient(const CombVisaModel& m, const Sample& s, CombVisaModel& grad,
                                ForwardTrace* out_trace = nullptr) {
  check_label(m, s.label);
  ForwardTrace local;
  ForwardTrace& tr = out_trace ? *out_trace : local;
  combvisa_logits(m, s.encoder, s.senti, tr);
  const double loss = cross_entropy(tr.logits, s.label);

  Vector d_logits = tr.probs;
  d_logits[s.label] -= 1.0;
  const Vector d_fused = mlp_backward(m.fusion, tr.fusion, d_logits, grad.fusion);
  const auto& cfg = m.config;
  if (cfg.use_sentivec) {
    mlp_backward(m.sw_head, tr.sw, d_fused.tail(cfg.d_sw), grad.sw_head);
  }
  const Vector d_features = mlp_backward(m.lm_head, tr.lm, d_fused.head(cfg.d_lm), grad.lm_head);
  if (cfg.encoder == EncoderKind::lstm) {
    Matrix d_hidden = Matrix::Zero(static_cast<Index>(tr.lstm.steps.size()), cfg.lstm_hidden);
    d_hidden.row(d_hidden.rows() - 1) = d_features.transpose();
    lstm_backward(m.lstm, tr.lstm, d_hidden, grad.lstm);
  } else {
    rcnn_backward(m.rcnn, tr.rcnn, d_features, grad.rcnn);
  }
  return loss;
}

inline double sample_loss(const CombVisaModel& m, const Sample& s) {
  check_label(m, s.label);
  ForwardTrace tr;
  return cross_entropy(combvisa_logits(m, s.encoder, s.senti, tr), s.label);
}

inline int argmax(const Vector& v) {
  Index best = 0;
  v.maxCoeff(&best);
  return static_cast<int>(best);
}

inline int predict(const CombVisaModel& m, const EncoderOutput& enc, const SentiVectors& sv) {
  return argmax(combvisa_forward(m, enc, sv));
}

}  // namespace combvisa::nn
