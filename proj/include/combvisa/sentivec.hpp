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

// Per-review sentiment feature vectors with negation-pattern reversal.

#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "combvisa/error.hpp"
#include "combvisa/io.hpp"
#include "combvisa/lexicon.hpp"

namespace combvisa {

/// Splits on Unicode whitespace. No case folding; '_' stays inside tokens.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t ws = 0;
    if (c == ' ' || (c >= 0x09 && c <= 0x0d)) {
      ws = 1;
    } else if (c == 0xc2 && i + 1 < text.size() &&
               (static_cast<unsigned char>(text[i + 1]) == 0x85 ||
                static_cast<unsigned char>(text[i + 1]) == 0xa0)) {
      ws = 2;  // U+0085, U+00A0
    } else if (c == 0xe1 && i + 2 < text.size() && text.substr(i, 3) == "\xe1\x9a\x80") {
      ws = 3;  // U+1680
    } else if (c == 0xe2 && i + 2 < text.size()) {
      const auto b1 = static_cast<unsigned char>(text[i + 1]);
      const auto b2 = static_cast<unsigned char>(text[i + 2]);
      // U+2000..U+200A, U+2028, U+2029, U+202F, U+205F
      if ((b1 == 0x80 && (b2 <= 0x8a || b2 == 0xa8 || b2 == 0xa9 || b2 == 0xaf)) ||
          (b1 == 0x81 && b2 == 0x9f)) {
        ws = 3;
      }
    } else if (c == 0xe3 && i + 2 < text.size() && text.substr(i, 3) == "\xe3\x80\x80") {
      ws = 3;  // U+3000
    }
    if (ws) {
      flush();
      i += ws;
    } else {
      current += text[i];
      ++i;
    }
  }
  flush();
  return tokens;
}

/// Negator patterns, each a sequence of 1-3 tokens. A pattern is stored
/// '_'-joined so it matches both token runs and pre-segmented tokens.
class NegatorSet {
 public:
  NegatorSet() = default;

  static NegatorSet defaults() {
    NegatorSet set;
    for (const char* p : {"vô", "bất", "chẳng", "không", "kém", "chẳng hề", "không bao giờ",
                          "chẳng bao giờ"}) {
      set.add(tokenize(p));
    }
    return set;
  }

  void add(std::span<const std::string> pattern) {
    if (pattern.empty()) return;
    std::size_t parts = 0;
    for (const auto& t : pattern) parts += lemma_token_count(t);
    auto joined = join_tokens(pattern);
    if (patterns_.insert(joined).second) max_parts_ = std::max(max_parts_, parts);
  }

  bool empty() const { return patterns_.empty(); }
  std::size_t size() const { return patterns_.size(); }
  std::size_t max_parts() const { return max_parts_; }
  bool contains_joined(std::string_view joined) const { return patterns_.count(joined) > 0; }
  const std::set<std::string, std::less<>>& patterns() const { return patterns_; }

 private:
  std::set<std::string, std::less<>> patterns_;
  std::size_t max_parts_ = 0;
};

/// One pattern per line, tokens space-separated; '#' comments.
inline NegatorSet load_negators(const std::filesystem::path& path) {
  NegatorSet set;
  const std::string text = io::read_file(path);
  for (const auto raw : io::split(text, '\n')) {
    const auto line = io::trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    set.add(tokenize(line));
  }
  if (set.empty()) throw ParseError(path.string(), 1, "negator file has no patterns");
  return set;
}

/// Token range [begin, end) covered by a negator occurrence.
struct NegationSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t parts = 0;

  friend bool operator==(const NegationSpan&, const NegationSpan&) = default;
};

/// Longest negator occurrence starting at `start`, measured in tokens.
inline std::optional<NegationSpan> negator_at(std::span<const std::string> tokens,
                                              std::size_t start, const NegatorSet& negators) {
  if (start >= tokens.size()) return std::nullopt;
  const std::size_t longest = std::min(negators.max_parts(), tokens.size() - start);
  for (std::size_t len = longest; len >= 1; --len) {
    const auto joined = join_tokens(tokens.subspan(start, len));
    if (negators.contains_joined(joined)) {
      return NegationSpan{start, start + len, lemma_token_count(joined)};
    }
  }
  return std::nullopt;
}

/// Finds a negator occurrence ending at most `window` tokens before
/// `position` (end index e with position - window <= e < position) and
/// starting at or after `min_begin`. Prefers the pattern with the most
/// parts, then the one ending nearest to `position`.
inline std::optional<NegationSpan> match_negation(std::span<const std::string> tokens,
                                                  std::size_t position,
                                                  const NegatorSet& negators, std::size_t window,
                                                  std::size_t min_begin = 0) {
  if (position == 0 || position > tokens.size() || window == 0) return std::nullopt;
  std::optional<NegationSpan> best;
  const std::size_t last = position - 1;
  const std::size_t first = position > window ? position - window : 0;
  for (std::size_t e = last + 1; e-- > first;) {
    const std::size_t max_len = std::min(negators.max_parts(), e + 1);
    for (std::size_t len = 1; len <= max_len; ++len) {
      const std::size_t b = e + 1 - len;
      if (b < min_begin) break;
      const auto joined = join_tokens(tokens.subspan(b, len));
      if (!negators.contains_joined(joined)) continue;
      const std::size_t parts = lemma_token_count(joined);
      if (!best || parts > best->parts) best = NegationSpan{b, e + 1, parts};
    }
  }
  return best;
}

/// Pads with zeros or truncates to exactly `length` entries.
inline std::vector<double> vsno(std::span<const double> vec, std::size_t length) {
  std::vector<double> out(length, 0.0);
  std::copy_n(vec.begin(), std::min(vec.size(), length), out.begin());
  return out;
}

struct SentiVecConfig {
  std::size_t length = 128;
  std::size_t negation_window = 2;

  void validate() const {
    if (length < 1) throw ConfigError("sentivec length L must be >= 1");
    if (negation_window < 1) throw ConfigError("negation window must be >= 1");
  }
};

struct SentiVectors {
  std::vector<double> pos_vec;
  std::vector<double> neg_vec;

  friend bool operator==(const SentiVectors&, const SentiVectors&) = default;
};

/// Raw (pre-normalization) evidence in token order, one entry per matched
/// sentiment word.
inline SentiVectors collect_senti_evidence(std::span<const std::string> tokens,
                                           const SentiLexicon& lexicon,
                                           const NegatorSet& negators,
                                           std::size_t negation_window) {
  SentiVectors raw;
  std::size_t prev_end = 0;  // end of the previous sentiment word
  std::size_t i = 0;
  while (i < tokens.size()) {
    // Negator tokens never count as sentiment words.
    if (const auto neg = negator_at(tokens, i, negators)) {
      i = neg->end;
      continue;
    }
    const auto hit = lookup_longest(lexicon, tokens, i);
    if (!hit) {
      ++i;
      continue;
    }
    const auto& e = *hit->entry;
    // A negator reverses only the nearest sentiment word that follows it.
    if (match_negation(tokens, i, negators, negation_window, prev_end)) {
      raw.neg_vec.push_back(e.pos_score);
      raw.pos_vec.push_back(e.neg_score);
    } else {
      raw.pos_vec.push_back(e.pos_score);
      raw.neg_vec.push_back(e.neg_score);
    }
    i += hit->span_length;
    prev_end = i;
  }
  return raw;
}

inline SentiVectors extract_senti_vectors(std::span<const std::string> tokens,
                                          const SentiLexicon& lexicon, const NegatorSet& negators,
                                          const SentiVecConfig& cfg) {
  cfg.validate();
  const auto raw = collect_senti_evidence(tokens, lexicon, negators, cfg.negation_window);
  return {vsno(raw.pos_vec, cfg.length), vsno(raw.neg_vec, cfg.length)};
}

inline std::string format_vector_csv(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += io::format_double(v[i]);
  }
  return out;
}

}  // namespace combvisa
