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

// Classification metrics and corpus length statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "combvisa/error.hpp"

namespace combvisa {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // gold count
};

struct EvalReport {
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  /// confusion[gold][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t samples = 0;
};

/// Harmonic mean; zero when both inputs are zero.
inline double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s == 0.0 ? 0.0 : 2.0 * precision * recall / s;
}

inline EvalReport compute_metrics(std::span<const int> predictions, std::span<const int> gold,
                                  int class_count) {
  if (predictions.size() != gold.size()) {
    throw DataError(fmt::format("{} predictions for {} gold labels", predictions.size(),
                                gold.size()));
  }
  if (class_count < 1) throw DataError("class_count must be >= 1");
  const auto k = static_cast<std::size_t>(class_count);
  EvalReport r;
  r.samples = gold.size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (const int y : {gold[i], predictions[i]}) {
      if (y < 0 || y >= class_count) {
        throw DataError(fmt::format("label {} at position {} outside [0, {})", y, i, class_count));
      }
    }
    ++r.confusion[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(predictions[i])];
  }

  std::size_t diagonal = 0;
  r.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t tp = r.confusion[c][c];
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t j = 0; j < k; ++j) {
      predicted += r.confusion[j][c];
      actual += r.confusion[c][j];
    }
    auto& m = r.per_class[c];
    m.support = actual;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = actual ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    diagonal += tp;
  }
  r.macro_precision /= static_cast<double>(k);
  r.macro_recall /= static_cast<double>(k);
  r.macro_f1 /= static_cast<double>(k);
  r.accuracy = r.samples ? static_cast<double>(diagonal) / static_cast<double>(r.samples) : 0.0;
  return r;
}

/// Per-class and macro rows, two decimals.
inline std::string format_report(const EvalReport& r, std::span<const std::string> class_names) {
  std::string out = fmt::format("{:<10} {:>9} {:>9} {:>9} {:>9}\n", "class", "precision",
                                "recall", "f1", "support");
  for (std::size_t c = 0; c < r.per_class.size(); ++c) {
    const auto& m = r.per_class[c];
    const std::string name = c < class_names.size() ? class_names[c] : std::to_string(c);
    out += fmt::format("{:<10} {:>9.2f} {:>9.2f} {:>9.2f} {:>9}\n", name, m.precision, m.recall,
                       m.f1, m.support);
  }
  out += fmt::format("{:<10} {:>9.2f} {:>9.2f} {:>9.2f} {:>9}\n", "macro", r.macro_precision,
                     r.macro_recall, r.macro_f1, r.samples);
  out += fmt::format("accuracy {:.4f}\n", r.accuracy);
  return out;
}

struct StatsReport {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;

  std::string to_text() const {
    return fmt::format(
        "Mean\t{:.2f}\nStd\t{:.2f}\nMin\t{:g}\n25%\t{:g}\n50%\t{:g}\n75%\t{:g}\nMax\t{:g}\n", mean,
        std, min, p25, p50, p75, max);
  }
};

/// Linear interpolation between closest ranks on sorted data:
/// position q * (n - 1).
inline double percentile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Mean, sample standard deviation (n - 1) and quartiles of token counts.
inline StatsReport corpus_stats(std::span<const std::size_t> token_counts) {
  if (token_counts.empty()) throw DataError("corpus_stats of an empty corpus");
  std::vector<double> v(token_counts.begin(), token_counts.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  StatsReport s;
  for (const double x : v) s.mean += x;
  s.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (const double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  }
  s.min = v.front();
  s.max = v.back();
  s.p25 = percentile_sorted(v, 0.25);
  s.p50 = percentile_sorted(v, 0.50);
  s.p75 = percentile_sorted(v, 0.75);
  return s;
}

}  // namespace combvisa
