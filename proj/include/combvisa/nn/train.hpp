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

// Mini-batch training with gradient accumulation.
//
// Each epoch visits the samples in a seeded random order, split into
// mini-batches of `batch_size`. Per-sample gradients are summed over
// `accumulation_steps` mini-batches (or until the epoch ends), divided by the
// number of samples summed, and applied in one optimizer step.

#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "combvisa/io.hpp"
#include "combvisa/nn/model.hpp"
#include "combvisa/nn/optimizer.hpp"

namespace combvisa::nn {

struct TrainConfig {
  std::size_t batch_size = 24;
  std::size_t epochs = 20;
  double learning_rate = 1e-3;
  std::size_t accumulation_steps = 16;
  std::uint64_t rng_seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;
  double init_scale = 0.08;
  /// When false, training continues from the parameters passed in.
  bool initialize = true;

  void validate() const {
    if (batch_size < 1 || epochs < 1 || accumulation_steps < 1) {
      throw ConfigError("batch_size, epochs and accumulation_steps must be >= 1");
    }
    if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
  }
};

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct History {
  std::vector<EpochStats> epochs;

  /// `epoch,loss,accuracy` with shortest round-trip decimals.
  std::string to_csv() const {
    std::string out = "epoch,loss,accuracy\n";
    for (const auto& e : epochs) {
      out += std::to_string(e.epoch) + ',' + io::format_double(e.loss) + ',' +
             io::format_double(e.accuracy) + '\n';
    }
    return out;
  }
};

/// Fisher-Yates with the platform-independent generator.
inline std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng.below(i)]);
  }
  return idx;
}

inline void check_dataset(const CombVisaModel& model, std::span<const Sample> data) {
  if (data.empty()) throw DataError("training set is empty");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int y = data[i].label;
    if (y < 0 || y >= model.config.class_count) {
      throw DataError(fmt::format("sample {}: label {} outside [0, {})", i, y,
                                  model.config.class_count));
    }
  }
}

/// Trains `model` in place. The per-epoch loss is the mean of the per-sample
/// losses observed during the epoch, summed in dataset order so the value
/// does not depend on the shuffle.
inline History train(CombVisaModel& model, std::span<const Sample> data, const TrainConfig& cfg) {
  cfg.validate();
  check_dataset(model, data);
  if (cfg.initialize) initialize_uniform(model, cfg.rng_seed, cfg.init_scale);

  Rng order_rng(cfg.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  Sgd sgd(cfg.learning_rate);
  Adam adam(model, cfg.learning_rate);
  CombVisaModel grad = model.zeros_like();

  History history;
  std::vector<double> losses(data.size());
  std::vector<char> correct(data.size());
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto order = shuffled_indices(data.size(), order_rng);
    std::size_t batches = 0;
    std::size_t pending = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        ForwardTrace tr;
        losses[i] = loss_and_gradient(model, data[i], grad, &tr);
        correct[i] = argmax(tr.probs) == data[i].label;
      }
      pending += stop - start;
      ++batches;
      if (batches == cfg.accumulation_steps || stop == order.size()) {
        const double scale = 1.0 / static_cast<double>(pending);
        for_each_tensor([&](const std::string&, auto& g) { g *= scale; }, grad);
        if (cfg.optimizer == OptimizerKind::adam) {
          adam.step(model, grad);
        } else {
          sgd.step(model, grad);
        }
        set_zero(grad);
        batches = 0;
        pending = 0;
      }
    }
    double loss_sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      loss_sum += losses[i];
      hits += correct[i] ? 1 : 0;
    }
    const double n = static_cast<double>(data.size());
    history.epochs.push_back({epoch, loss_sum / n, static_cast<double>(hits) / n});
  }
  return history;
}

inline std::vector<int> predict_all(const CombVisaModel& model, std::span<const Sample> data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& s : data) out.push_back(predict(model, s.encoder, s.senti));
  return out;
}

}  // namespace combvisa::nn
