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

// Labeled review datasets (`label \t text` TSV) and a synthetic corpus whose
// gold labels are fully determined by lexicon words and negators.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "combvisa/embeddings.hpp"
#include "combvisa/error.hpp"
#include "combvisa/io.hpp"
#include "combvisa/lexicon.hpp"
#include "combvisa/nn/tensor.hpp"
#include "combvisa/sentivec.hpp"

namespace combvisa {

class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty() || !seen.insert(n).second) {
        throw ConfigError(fmt::format("label set has an empty or duplicate name '{}'", n));
      }
    }
  }

  /// Comma-separated names, e.g. "POS,NEG,NEU".
  static LabelSet parse(std::string_view csv) {
    std::vector<std::string> names;
    for (const auto part : io::split(csv, ',')) names.emplace_back(part);
    return LabelSet(std::move(names));
  }

  /// -1 when absent.
  int index(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
  }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  std::string to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < names_.size(); ++i) out += (i ? "," : "") + names_[i];
    return out;
  }

 private:
  std::vector<std::string> names_;
};

struct LabeledText {
  int label = 0;
  std::string text;
};

struct Dataset {
  LabelSet labels;
  std::vector<LabeledText> rows;
};

/// Parses `label \t text` rows. With an empty `declared` set the labels are
/// inferred (sorted unique names); otherwise unknown labels are errors.
inline Dataset parse_dataset(std::string_view text, const std::string& src,
                             const LabelSet& declared = {}) {
  struct Raw {
    std::string_view label, text;
    std::size_t line;
  };
  std::vector<Raw> raw;
  std::size_t line_no = 0;
  for (const auto l : io::split(text, '\n')) {
    ++line_no;
    const auto line = io::trim_cr(l);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(src, line_no, "expected 'label\\ttext'");
    }
    raw.push_back({line.substr(0, tab), line.substr(tab + 1), line_no});
  }

  Dataset ds;
  if (declared.empty()) {
    std::set<std::string> names;
    for (const auto& r : raw) names.emplace(r.label);
    ds.labels = LabelSet(std::vector<std::string>(names.begin(), names.end()));
  } else {
    ds.labels = declared;
  }
  for (const auto& r : raw) {
    const int y = ds.labels.index(r.label);
    if (y < 0) {
      throw ParseError(src, r.line,
                       fmt::format("label '{}' not in {{{}}}", r.label, ds.labels.to_csv()));
    }
    ds.rows.push_back({y, std::string(r.text)});
  }
  return ds;
}

inline Dataset load_dataset(const std::filesystem::path& path, const LabelSet& declared = {}) {
  return parse_dataset(io::read_file(path), path.string(), declared);
}

inline std::string format_dataset(const Dataset& ds) {
  std::string out;
  for (const auto& r : ds.rows) {
    out += ds.labels.names()[static_cast<std::size_t>(r.label)] + '\t' + r.text + '\n';
  }
  return out;
}

struct SyntheticConfig {
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  std::size_t min_sentiment_words = 1;
  std::size_t max_sentiment_words = 3;
  double negation_prob = 0.35;
  std::size_t min_filler = 2;
  std::size_t max_filler = 8;
  /// Reviews whose net polarity is closer to zero than this are redrawn.
  double min_margin = 0.1;
};

struct SyntheticCorpus {
  SentiLexicon lexicon;
  Dataset data;
};

namespace synthetic {

struct Word {
  const char* lemma;
  double score;
};

inline constexpr Word kPositive[] = {{"tốt", 0.75},      {"đẹp", 0.875},      {"bền", 0.625},
                                     {"rẻ", 0.5},        {"nhanh", 0.75},     {"tiết_kiệm", 0.625},
                                     {"tuyệt_vời", 1.0}, {"hài_lòng", 0.875}};
inline constexpr Word kNegative[] = {{"xấu", 0.75},      {"tệ", 0.875},  {"chậm", 0.625},
                                     {"đắt", 0.5},       {"hỏng", 0.75}, {"thất_vọng", 1.0},
                                     {"ồn", 0.625},      {"nóng", 0.5}};
inline constexpr const char* kFiller[] = {
    "chiếc", "xe", "này", "máy", "điện_thoại", "pin", "màn_hình", "dùng", "rất",
    "mà",    "còn", "nữa", "sản_phẩm", "giao_hàng", "shop", "mình", "thấy", "camera"};
inline constexpr const char* kNegators[] = {"không", "chẳng", "không bao giờ", "chẳng hề"};

}  // namespace synthetic

/// Lexicon of the synthetic vocabulary: purely polar entries.
inline SentiLexicon synthetic_lexicon() {
  SentiLexicon lex("synthetic");
  for (const auto& w : synthetic::kPositive) {
    lex.upsert({w.lemma, PosTag::adjective, w.score, 0.0, {}, Provenance::seed_file});
  }
  for (const auto& w : synthetic::kNegative) {
    lex.upsert({w.lemma, PosTag::adjective, 0.0, w.score, {}, Provenance::seed_file});
  }
  return lex;
}

/// Binary POS/NEG corpus. Each review mixes filler words with sentiment
/// words, some immediately preceded by a negator; the label is the sign of
/// the net polarity after reversal.
inline SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.min_sentiment_words < 1 || cfg.max_sentiment_words < cfg.min_sentiment_words ||
      cfg.max_filler < cfg.min_filler) {
    throw ConfigError("inconsistent synthetic corpus ranges");
  }
  nn::Rng rng(cfg.seed);
  auto between = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
  };
  SyntheticCorpus corpus{synthetic_lexicon(), {LabelSet({"POS", "NEG"}), {}}};
  while (corpus.data.rows.size() < cfg.samples) {
    const std::size_t n_sent = between(cfg.min_sentiment_words, cfg.max_sentiment_words);
    const std::size_t n_fill = between(cfg.min_filler, cfg.max_filler);
    // Slot plan: true = sentiment word.
    std::vector<bool> slots(n_sent, true);
    slots.insert(slots.end(), n_fill, false);
    for (std::size_t i = slots.size(); i > 1; --i) {
      const auto j = rng.below(i);
      const bool tmp = slots[i - 1];
      slots[i - 1] = slots[j];
      slots[j] = tmp;
    }
    std::string text;
    double margin = 0.0;
    auto emit = [&](std::string_view tok) {
      if (!text.empty()) text += ' ';
      text += tok;
    };
    for (const bool sentiment : slots) {
      if (!sentiment) {
        emit(synthetic::kFiller[rng.below(std::size(synthetic::kFiller))]);
        continue;
      }
      const bool positive = rng.below(2) == 0;
      const auto& w = positive ? synthetic::kPositive[rng.below(std::size(synthetic::kPositive))]
                               : synthetic::kNegative[rng.below(std::size(synthetic::kNegative))];
      const bool negated = rng.uniform() < cfg.negation_prob;
      if (negated) emit(synthetic::kNegators[rng.below(std::size(synthetic::kNegators))]);
      emit(w.lemma);
      const double polarity = positive ? w.score : -w.score;
      margin += negated ? -polarity : polarity;
    }
    if (std::abs(margin) < cfg.min_margin) continue;
    corpus.data.rows.push_back({margin > 0.0 ? 0 : 1, std::move(text)});
  }
  return corpus;
}

/// Static embeddings for the synthetic vocabulary. With `informative`,
/// positive words cluster around +u and negative words around -u; otherwise
/// every vector is independent noise.
inline EmbeddingTable synthetic_embeddings(std::size_t dim, std::uint64_t seed, bool informative) {
  nn::Rng rng(seed);
  EmbeddingTable table(dim);
  Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
  for (auto& x : u) x = rng.uniform(-1.0, 1.0);
  u.normalize();
  auto noise = [&](double scale) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (auto& x : v) x = rng.uniform(-scale, scale);
    return v;
  };
  for (const auto& w : synthetic::kPositive) {
    table.insert(w.lemma, informative ? Eigen::VectorXd(u + noise(0.2)) : noise(1.0));
  }
  for (const auto& w : synthetic::kNegative) {
    table.insert(w.lemma, informative ? Eigen::VectorXd(-u + noise(0.2)) : noise(1.0));
  }
  for (const char* f : synthetic::kFiller) table.insert(f, noise(informative ? 0.2 : 1.0));
  for (const char* n : synthetic::kNegators) {
    for (const auto& tok : tokenize(n)) {
      if (!table.find(tok)) table.insert(tok, noise(informative ? 0.2 : 1.0));
    }
  }
  return table;
}

}  // namespace combvisa
