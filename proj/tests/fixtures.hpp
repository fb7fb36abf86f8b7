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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "combvisa/embeddings.hpp"
#include "combvisa/expansion.hpp"
#include "combvisa/lexicon.hpp"

namespace combvisa::testing {

// Ten-word expansion fixture: four seeds plus one neutral entry, three
// thesaurus edges, six candidates, 2-D embeddings.
inline const char* kFixtureLexicon =
    "a\t1\t0.875\t0\tgood#1\t\n"
    "a\t2\t0.75\t0\tnice#1\t\n"
    "a\t3\t0\t0.875\tbad#1\t\n"
    "a\t4\t0\t0.625\tawful#1\t\n"
    "a\t5\t0.25\t0.25\tmeh#1\t\n";

inline const char* kFixtureThesaurus =
    "good\tgreat\tsyn\n"
    "nice\tugly\tant\n"
    "bad\tpoor\tsyn\n";

inline const std::set<std::string> kFixtureCandidates{"great", "ugly", "poor",
                                                      "fine",  "cheap", "meh"};

inline EmbeddingTable fixture_embeddings() {
  const std::map<std::string, std::pair<double, double>> pts{
      {"good", {1, 0.2}},     {"nice", {0.8, 0.6}},   {"bad", {-1, 0.1}},
      {"awful", {-0.7, -0.7}}, {"meh", {0.1, 1}},     {"great", {0.9, 0.1}},
      {"ugly", {-0.6, 0.5}},  {"poor", {-0.9, -0.3}}, {"fine", {0.5, 0.5}},
      {"cheap", {0.2, -0.9}}};
  EmbeddingTable t(2);
  for (const auto& [w, p] : pts) t.insert(w, Eigen::Vector2d(p.first, p.second));
  return t;
}

// Hand trace (independent float64 evaluation of the mean cosine distances
// to P = {good, nice, great} and N = {bad, awful, ugly, poor}, each word
// excluded from its own average), proximal orientation.
inline const std::map<std::string, double> kFixtureExpectedPos{
    {"cheap", 0.50493905125381033},
    {"fine", 0.92591912776760177},
    {"great", 0.96308298048664187},
    {"poor", 0.10123933765556932},
    {"ugly", 0.25466568664940203},
};

inline ThesaurusGraph fixture_thesaurus() {
  ThesaurusGraph g;
  g.add_edge("good", "great", Relation::synonym);
  g.add_edge("nice", "ugly", Relation::antonym);
  g.add_edge("bad", "poor", Relation::synonym);
  return g;
}

}  // namespace combvisa::testing
