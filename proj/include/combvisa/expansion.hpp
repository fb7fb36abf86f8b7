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

// Lexicon expansion: purely polar seed extraction, synonym/antonym
// propagation over a thesaurus, and distance-based polarity scoring of
// candidate words against the seed sets.

#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "combvisa/embeddings.hpp"
#include "combvisa/error.hpp"
#include "combvisa/io.hpp"
#include "combvisa/lexicon.hpp"

namespace combvisa {

enum class Relation { synonym, antonym };

/// Symmetric, self-loop-free synonym/antonym graph.
class ThesaurusGraph {
 public:
  void add_edge(const std::string& a, const std::string& b, Relation rel) {
    if (a == b) return;
    adjacency_[rel_index(rel)][a].insert(b);
    adjacency_[rel_index(rel)][b].insert(a);
  }

  const std::set<std::string>& neighbors(std::string_view lemma, Relation rel) const {
    static const std::set<std::string> kNone;
    const auto& adj = adjacency_[rel_index(rel)];
    const auto it = adj.find(lemma);
    return it == adj.end() ? kNone : it->second;
  }

  std::size_t edge_count(Relation rel) const {
    std::size_t n = 0;
    for (const auto& [_, nb] : adjacency_[rel_index(rel)]) n += nb.size();
    return n / 2;
  }

 private:
  static std::size_t rel_index(Relation rel) { return rel == Relation::synonym ? 0 : 1; }

  std::map<std::string, std::set<std::string>, std::less<>> adjacency_[2];
};

/// `lemma \t lemma \t syn|ant` lines; '#' comments. Symmetric closure applied.
inline ThesaurusGraph load_thesaurus(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  ThesaurusGraph graph;
  std::size_t line_no = 0;
  for (const auto raw : io::split(text, '\n')) {
    ++line_no;
    const auto line = io::trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = io::split(line, '\t');
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty()) {
      throw ParseError(path.string(), line_no, "expected 'lemma\\tlemma\\tsyn|ant'");
    }
    Relation rel;
    if (cols[2] == "syn") {
      rel = Relation::synonym;
    } else if (cols[2] == "ant") {
      rel = Relation::antonym;
    } else {
      throw ParseError(path.string(), line_no, fmt::format("unknown relation '{}'", cols[2]));
    }
    graph.add_edge(std::string(cols[0]), std::string(cols[1]), rel);
  }
  return graph;
}

/// One lemma per line; blank lines and '#' comments skipped.
inline std::set<std::string> load_candidates(const std::filesystem::path& path) {
  std::set<std::string> out;
  const std::string text = io::read_file(path);
  for (const auto raw : io::split(text, '\n')) {
    const auto fields = io::split_blank(raw);
    if (fields.empty() || fields.front().front() == '#') continue;
    out.emplace(fields.front());
  }
  return out;
}

struct SeedSets {
  std::set<std::string> positive;
  std::set<std::string> negative;
  std::set<std::string> conflicts;

  bool labeled(const std::string& w) const { return positive.count(w) || negative.count(w); }

  friend bool operator==(const SeedSets&, const SeedSets&) = default;
};

/// How distances map to a positive score.
///  - literal:  pos = d_pos / (d_pos + d_neg), the formula as printed.
///  - proximal: pos = d_neg / (d_pos + d_neg), closer to P means more positive.
enum class Orientation { literal, proximal };

struct ExpansionConfig {
  double threshold = 0.5;
  int depth = 1;
  DistanceMetric metric = DistanceMetric::cosine;
  Orientation orientation = Orientation::proximal;
  std::size_t min_seed_hits = 1;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
      throw ConfigError(fmt::format("threshold T must lie in (0,1), got {}", threshold));
    }
    if (depth < 0) throw ConfigError("propagation depth must be >= 0");
    if (min_seed_hits < 1) throw ConfigError("min_seed_hits must be >= 1");
  }
};

class NoSeedsError : public ConfigError {
 public:
  NoSeedsError() : ConfigError("no purely polar seed words above the threshold") {}
};

class InsufficientSeedsError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The candidate has no embedding (or a zero one under cosine).
class UnscorableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kZeroScoreTolerance = 1e-12;

/// P = {pos > T, neg == 0}, N = {neg > T, pos == 0}; zero within 1e-12.
inline SeedSets extract_seeds(const SentiLexicon& lexicon, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError(fmt::format("threshold T must lie in (0,1), got {}", threshold));
  }
  SeedSets seeds;
  for (const auto& [lemma, e] : lexicon) {
    if (e.pos_score > threshold && std::abs(e.neg_score) <= kZeroScoreTolerance) {
      seeds.positive.insert(lemma);
    } else if (e.neg_score > threshold && std::abs(e.pos_score) <= kZeroScoreTolerance) {
      seeds.negative.insert(lemma);
    }
  }
  if (seeds.positive.empty() && seeds.negative.empty()) throw NoSeedsError();
  return seeds;
}

/// Breadth-first polarity propagation for `depth` rounds.
///
/// Each round, every word labeled in the previous round (the seeds in round
/// one) proposes its polarity to its synonyms and the opposite polarity to
/// its antonyms. All proposals of a round are collected before any label
/// changes, so the result does not depend on iteration order.
///  - Words labeled on input are never relabeled.
///  - A new word proposed both polarities goes to `conflicts`.
///  - A word labeled by an earlier round that is later proposed the opposite
///    polarity is moved from P/N to `conflicts`.
///  - Conflicted words are never labeled and do not propagate.
inline SeedSets propagate(const SeedSets& seeds, const ThesaurusGraph& graph, int depth) {
  enum : unsigned { kPos = 1, kNeg = 2 };
  SeedSets out = seeds;
  const auto fixed = [&](const std::string& w) {
    return seeds.positive.count(w) || seeds.negative.count(w);
  };

  std::map<std::string, unsigned> frontier;
  for (const auto& w : seeds.positive) frontier[w] = kPos;
  for (const auto& w : seeds.negative) frontier[w] = kNeg;

  for (int round = 0; round < depth && !frontier.empty(); ++round) {
    std::map<std::string, unsigned> proposals;
    for (const auto& [w, pol] : frontier) {
      const unsigned opposite = pol == kPos ? kNeg : kPos;
      for (const auto& s : graph.neighbors(w, Relation::synonym)) proposals[s] |= pol;
      for (const auto& a : graph.neighbors(w, Relation::antonym)) proposals[a] |= opposite;
    }

    std::map<std::string, unsigned> next;
    for (const auto& [w, pols] : proposals) {
      if (fixed(w) || out.conflicts.count(w)) continue;
      const bool in_pos = out.positive.count(w) > 0;
      const bool in_neg = out.negative.count(w) > 0;
      if (in_pos || in_neg) {
        if ((in_pos && (pols & kNeg)) || (in_neg && (pols & kPos))) {
          out.positive.erase(w);
          out.negative.erase(w);
          out.conflicts.insert(w);
        }
        continue;
      }
      if (pols == (kPos | kNeg)) {
        out.conflicts.insert(w);
      } else {
        (pols == kPos ? out.positive : out.negative).insert(w);
        next.emplace(w, pols);
      }
    }
    // A word moved to conflicts this round must not propagate next round.
    std::erase_if(next, [&](const auto& kv) { return out.conflicts.count(kv.first) > 0; });
    frontier = std::move(next);
  }
  return out;
}

struct ScoreBreakdown {
  std::string lemma;
  double d_pos = 0.0;
  double d_neg = 0.0;
  double pos_score = 0.5;
  double neg_score = 0.5;
};

/// Positive/negative score pair from mean seed distances; the pair sums to
/// one. A zero total gives 0.5/0.5.
inline std::pair<double, double> polarity_from_distances(double d_pos, double d_neg,
                                                         Orientation orientation) {
  const double total = d_pos + d_neg;
  if (total == 0.0) return {0.5, 0.5};
  const double pos = (orientation == Orientation::literal ? d_pos : d_neg) / total;
  return {pos, 1.0 - pos};
}

namespace detail {

struct SeedMean {
  double mean = 0.0;
  std::size_t hits = 0;
};

inline SeedMean mean_distance(const Eigen::VectorXd& w_vec, const std::string& w,
                              const std::set<std::string>& seeds, const EmbeddingTable& table,
                              DistanceMetric metric) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (const auto& s : seeds) {
    if (s == w) continue;
    const auto* v = table.find(s);
    if (!v) continue;
    sum += distance(w_vec, *v, metric);
    ++hits;
  }
  return {hits ? sum / static_cast<double>(hits) : 0.0, hits};
}

inline std::size_t embedded_count(const std::set<std::string>& words, const EmbeddingTable& table,
                                  const std::string& exclude = {}) {
  std::size_t n = 0;
  for (const auto& w : words) n += (w != exclude && table.find(w)) ? 1 : 0;
  return n;
}

}  // namespace detail

inline ScoreBreakdown score_word(const std::string& w, const SeedSets& seeds,
                                 const EmbeddingTable& table, const ExpansionConfig& cfg) {
  const auto* w_vec = table.find(w);
  if (!w_vec) throw UnscorableError(fmt::format("'{}' has no embedding", w));
  if (cfg.metric == DistanceMetric::cosine && w_vec->norm() == 0.0) {
    throw UnscorableError(fmt::format("'{}' has a zero embedding", w));
  }
  if (detail::embedded_count(seeds.positive, table, w) < cfg.min_seed_hits ||
      detail::embedded_count(seeds.negative, table, w) < cfg.min_seed_hits) {
    throw InsufficientSeedsError(
        fmt::format("fewer than {} embedded seed words in P or N", cfg.min_seed_hits));
  }
  ScoreBreakdown out;
  out.lemma = w;
  out.d_pos = detail::mean_distance(*w_vec, w, seeds.positive, table, cfg.metric).mean;
  out.d_neg = detail::mean_distance(*w_vec, w, seeds.negative, table, cfg.metric).mean;
  std::tie(out.pos_score, out.neg_score) =
      polarity_from_distances(out.d_pos, out.d_neg, cfg.orientation);
  return out;
}

struct ExpansionReport {
  std::size_t scored = 0;
  std::size_t skipped_existing = 0;
  std::size_t unscorable = 0;
  std::size_t conflicts = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  std::string to_text() const {
    return fmt::format(
        "scored={}\nskipped_existing={}\nunscorable={}\nconflicts={}\npositive_seeds={}\n"
        "negative_seeds={}\n",
        scored, skipped_existing, unscorable, conflicts, positive, negative);
  }
};

struct ExpansionResult {
  SentiLexicon lexicon;
  ExpansionReport report;
  SeedSets seeds;
};

/// Seeds from the lexicon, propagated over the thesaurus, then every
/// embedded candidate absent from the lexicon is scored and added.
inline ExpansionResult expand_lexicon(const SentiLexicon& lexicon, const ThesaurusGraph& graph,
                                      const EmbeddingTable& table,
                                      const std::set<std::string>& candidates,
                                      const ExpansionConfig& cfg) {
  cfg.validate();
  ExpansionResult result{lexicon, {}, {}};
  result.seeds = propagate(extract_seeds(lexicon, cfg.threshold), graph, cfg.depth);
  const SeedSets& seeds = result.seeds;
  auto& report = result.report;
  report.positive = seeds.positive.size();
  report.negative = seeds.negative.size();
  report.conflicts = seeds.conflicts.size();

  if (detail::embedded_count(seeds.positive, table) < cfg.min_seed_hits ||
      detail::embedded_count(seeds.negative, table) < cfg.min_seed_hits) {
    throw InsufficientSeedsError(
        fmt::format("fewer than {} embedded seed words in P or N", cfg.min_seed_hits));
  }

  for (const auto& w : candidates) {
    if (lexicon.contains(w)) {
      ++report.skipped_existing;
      continue;
    }
    try {
      const auto s = score_word(w, seeds, table, cfg);
      result.lexicon.upsert(SentiEntry{w, PosTag::unknown, s.pos_score, s.neg_score, {},
                                       Provenance::expanded});
      ++report.scored;
    } catch (const UnscorableError&) {
      ++report.unscorable;
    } catch (const UndefinedDistance&) {
      ++report.unscorable;
    } catch (const InsufficientSeedsError&) {
      // Only reachable when w is itself one of too few seeds.
      ++report.unscorable;
    }
  }
  return result;
}

}  // namespace combvisa
