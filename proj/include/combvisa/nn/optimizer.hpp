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

#pragma once

#include <cmath>
#include <string>

#include "combvisa/nn/model.hpp"

namespace combvisa::nn {

enum class OptimizerKind { sgd, adam };

class Sgd {
 public:
  explicit Sgd(double lr) : lr_(lr) {}

  void step(CombVisaModel& model, const CombVisaModel& grad) {
    for_each_tensor([&](const std::string&, auto& w, const auto& g) { w -= lr_ * g; }, model,
                    grad);
  }

 private:
  double lr_;
};

/// Adaptive moment estimation with bias correction.
class Adam {
 public:
  Adam(const CombVisaModel& model, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps), m_(model.zeros_like()),
        v_(model.zeros_like()) {}

  void step(CombVisaModel& model, const CombVisaModel& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for_each_tensor(
        [&](const std::string&, auto& w, const auto& g, auto& m, auto& v) {
          m = beta1_ * m + (1.0 - beta1_) * g;
          v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
          w.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
        },
        model, grad, m_, v_);
  }

 private:
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
  CombVisaModel m_, v_;
};

}  // namespace combvisa::nn
