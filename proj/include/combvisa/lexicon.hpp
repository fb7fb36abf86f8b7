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

// SentiWordNet-style lexicon: data model, tab-separated file I/O and
// longest-match lookup of multiword lemmas.
//
// File format (UTF-8, LF):
//   POS \t ID \t PosScore \t NegScore \t SynsetTerms [\t Gloss]
// SynsetTerms is a space-separated list of `lemma#sense`. Lines starting
// with '#' are comments. Multiword lemmas join their tokens with '_'.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "combvisa/error.hpp"
#include "combvisa/io.hpp"

namespace combvisa {

enum class PosTag { noun, verb, adjective, adverb, unknown };

enum class Provenance { seed_file, expanded };

inline PosTag pos_tag_from_letter(std::string_view s) {
  if (s == "n") return PosTag::noun;
  if (s == "v") return PosTag::verb;
  if (s == "a") return PosTag::adjective;
  if (s == "r") return PosTag::adverb;
  return PosTag::unknown;
}

inline std::string_view pos_tag_letter(PosTag tag) {
  switch (tag) {
    case PosTag::noun: return "n";
    case PosTag::verb: return "v";
    case PosTag::adjective: return "a";
    case PosTag::adverb: return "r";
    case PosTag::unknown: break;
  }
  return "u";
}

struct SentiEntry {
  std::string lemma;
  PosTag pos_tag = PosTag::unknown;
  double pos_score = 0.0;
  double neg_score = 0.0;
  std::string gloss;
  Provenance provenance = Provenance::seed_file;

  double polarity_strength() const { return std::abs(pos_score - neg_score); }

  friend bool operator==(const SentiEntry&, const SentiEntry&) = default;
};

/// Number of '_'-separated tokens in a lemma.
inline std::size_t lemma_token_count(std::string_view lemma) {
  return static_cast<std::size_t>(std::count(lemma.begin(), lemma.end(), '_')) + 1;
}

inline std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += '_';
    out += tokens[i];
  }
  return out;
}

/// Lemma-keyed lexicon. Iteration order is lexicographic by lemma.
class SentiLexicon {
 public:
  SentiLexicon() = default;
  explicit SentiLexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t max_phrase_len() const { return max_phrase_len_; }

  /// Returns nullptr for absent lemmas.
  const SentiEntry* find(std::string_view lemma) const {
    const auto it = entries_.find(lemma);
    return it == entries_.end() ? nullptr : &it->second;
  }
  bool contains(std::string_view lemma) const { return find(lemma) != nullptr; }

  /// Inserts or replaces the entry for `entry.lemma`.
  void upsert(SentiEntry entry) {
    max_phrase_len_ = std::max(max_phrase_len_, lemma_token_count(entry.lemma));
    auto key = entry.lemma;
    entries_.insert_or_assign(std::move(key), std::move(entry));
  }

  const std::map<std::string, SentiEntry, std::less<>>& entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Field-by-field equality of entries; the display name is ignored.
  friend bool operator==(const SentiLexicon& a, const SentiLexicon& b) {
    return a.entries_ == b.entries_ && a.max_phrase_len_ == b.max_phrase_len_;
  }

 private:
  std::string name_;
  std::map<std::string, SentiEntry, std::less<>> entries_;
  std::size_t max_phrase_len_ = 1;
};

namespace detail {

inline double parse_score(std::string_view field, const std::string& path, std::size_t line,
                          const char* what) {
  const auto v = io::parse_double(field);
  if (!v || !(*v >= 0.0 && *v <= 1.0)) {
    throw ParseError(path, line,
                     fmt::format("{} '{}' is not a real in [0,1]", what, field));
  }
  return *v;
}

// Expanded entries are written with an 'x'-prefixed ID so the provenance
// survives a save/load cycle.
inline constexpr char kExpandedIdPrefix = 'x';

}  // namespace detail

/// Parses lexicon text. `source` names the origin in error messages.
inline SentiLexicon parse_lexicon(std::string_view text, const std::string& source) {
  SentiLexicon lex(std::filesystem::path(source).stem().string());
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    const auto line = io::trim_cr(text.substr(begin, end - begin));
    begin = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto cols = io::split(line, '\t');
    if (cols.size() < 5) {
      throw ParseError(source, line_no,
                       fmt::format("expected at least 5 tab-separated columns, got {}",
                                   cols.size()));
    }
    const double pos = detail::parse_score(cols[2], source, line_no, "PosScore");
    const double neg = detail::parse_score(cols[3], source, line_no, "NegScore");
    const bool expanded = !cols[1].empty() && cols[1].front() == detail::kExpandedIdPrefix;

    for (const auto term : io::split_blank(cols[4])) {
      const auto hash = term.rfind('#');
      const auto lemma = hash == std::string_view::npos ? term : term.substr(0, hash);
      if (lemma.empty()) continue;
      SentiEntry entry{std::string(lemma),
                       pos_tag_from_letter(cols[0]),
                       pos,
                       neg,
                       cols.size() > 5 ? std::string(cols[5]) : std::string(),
                       expanded ? Provenance::expanded : Provenance::seed_file};
      // Keep the most polarized sense; ties keep the first occurrence.
      const SentiEntry* existing = lex.find(entry.lemma);
      if (existing && existing->polarity_strength() >= entry.polarity_strength()) continue;
      lex.upsert(std::move(entry));
    }
  }
  return lex;
}

inline SentiLexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(io::read_file(path), path.string());
}

inline std::string format_lexicon(const SentiLexicon& lex) {
  std::string out = "# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss\n";
  std::size_t index = 0;
  for (const auto& [lemma, e] : lex) {
    ++index;
    const bool expanded = e.provenance == Provenance::expanded;
    out += fmt::format("{}\t{}{:08d}\t{}\t{}\t{}#1\t{}\n", pos_tag_letter(e.pos_tag),
                       expanded ? std::string(1, detail::kExpandedIdPrefix) : std::string(),
                       index, io::format_double(e.pos_score), io::format_double(e.neg_score),
                       lemma, e.gloss);
  }
  return out;
}

inline void save_lexicon(const SentiLexicon& lex, const std::filesystem::path& path) {
  io::write_atomic(path, format_lexicon(lex));
}

struct LexiconMatch {
  const SentiEntry* entry = nullptr;
  std::size_t span_length = 0;
};

/// Longest run of tokens starting at `start` whose '_'-joined form is a
/// lemma. Runs are bounded by max_phrase_len and the end of `tokens`.
inline std::optional<LexiconMatch> lookup_longest(const SentiLexicon& lex,
                                                  std::span<const std::string> tokens,
                                                  std::size_t start) {
  if (start >= tokens.size()) return std::nullopt;
  const std::size_t longest = std::min(lex.max_phrase_len(), tokens.size() - start);
  for (std::size_t len = longest; len >= 1; --len) {
    if (const auto* e = lex.find(join_tokens(tokens.subspan(start, len)))) {
      return LexiconMatch{e, len};
    }
  }
  return std::nullopt;
}

}  // namespace combvisa
