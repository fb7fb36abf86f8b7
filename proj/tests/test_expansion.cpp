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

#include "combvisa/expansion.hpp"

#include <random>
#include <tuple>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "test_util.hpp"

namespace combvisa {
namespace {

using testing::scratch_dir;
using testing::write_file;

SentiLexicon lexicon_of(std::initializer_list<std::tuple<const char*, double, double>> rows) {
  SentiLexicon lex;
  for (const auto& [w, p, n] : rows) lex.upsert({w, PosTag::adjective, p, n, "", Provenance::seed_file});
  return lex;
}

TEST(ExtractSeeds, StrictThresholdAndPurity) {
  const auto s = extract_seeds(lexicon_of({{"a", 0.8, 0.0}, {"b", 0.6, 0.1}, {"c", 0.0, 0.9}}), 0.5);
  EXPECT_EQ(s.positive, std::set<std::string>{"a"});
  EXPECT_EQ(s.negative, std::set<std::string>{"c"});
  EXPECT_TRUE(s.conflicts.empty());
}

TEST(ExtractSeeds, NoSeedsIsError) {
  EXPECT_THROW(extract_seeds(lexicon_of({{"a", 0.3, 0.0}, {"b", 0.3, 0.0}}), 0.5), NoSeedsError);
  EXPECT_THROW(extract_seeds(lexicon_of({{"a", 0.5, 0.0}}), 0.5), NoSeedsError);
}

TEST(ExtractSeeds, ThresholdOutOfRange) {
  const auto lex = lexicon_of({{"a", 0.8, 0.0}});
  EXPECT_THROW(extract_seeds(lex, 0.0), ConfigError);
  EXPECT_THROW(extract_seeds(lex, 1.0), ConfigError);
}

TEST(Thesaurus, SymmetricNoSelfLoops) {
  const auto dir = scratch_dir("thes");
  const auto g = load_thesaurus(write_file(dir / "t.tsv", "a\tb\tsyn\nc\ta\tant\nd\td\tsyn\n"));
  EXPECT_EQ(g.neighbors("b", Relation::synonym), std::set<std::string>{"a"});
  EXPECT_EQ(g.neighbors("a", Relation::antonym), std::set<std::string>{"c"});
  EXPECT_TRUE(g.neighbors("d", Relation::synonym).empty());
  EXPECT_THROW(load_thesaurus(write_file(dir / "u.tsv", "a\tb\tfoo\n")), ParseError);
}

TEST(Candidates, OnePerLine) {
  const auto dir = scratch_dir("cands");
  const auto c = load_candidates(write_file(dir / "c.txt", "# header\ntốt\n\nđẹp extra\r\ntốt\n"));
  EXPECT_EQ(c, (std::set<std::string>{"tốt", "đẹp"}));
}

TEST(Propagate, OneRound) {
  ThesaurusGraph g;
  g.add_edge("good", "great", Relation::synonym);
  g.add_edge("good", "bad", Relation::antonym);
  const auto out = propagate({{"good"}, {}, {}}, g, 1);
  EXPECT_EQ(out.positive, (std::set<std::string>{"good", "great"}));
  EXPECT_EQ(out.negative, std::set<std::string>{"bad"});
}

TEST(Propagate, DepthZeroIsIdentity) {
  ThesaurusGraph g;
  g.add_edge("good", "great", Relation::synonym);
  const SeedSets in{{"good"}, {"bad"}, {}};
  EXPECT_EQ(propagate(in, g, 0), in);
}

TEST(Propagate, AntonymOfNegativeIsPositive) {
  ThesaurusGraph g;
  g.add_edge("bad", "fine", Relation::antonym);
  const auto out = propagate({{}, {"bad"}, {}}, g, 1);
  EXPECT_EQ(out.positive, std::set<std::string>{"fine"});
}

// Brute force: the set of polarities reaching each word over every signed
// walk of at most `depth` edges from a seed, walking only through words
// that are not themselves conflicted.
std::map<std::string, unsigned> walk_polarities(const SeedSets& seeds,
                                                const std::vector<std::tuple<std::string, std::string, bool>>& edges,
                                                int depth) {
  std::map<std::string, unsigned> reach;
  std::vector<std::pair<std::string, unsigned>> walkers;
  for (const auto& p : seeds.positive) walkers.push_back({p, 1});
  for (const auto& n : seeds.negative) walkers.push_back({n, 2});
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<std::string, unsigned>> next;
    for (const auto& [w, pol] : walkers) {
      for (const auto& [a, b, antonym] : edges) {
        for (const auto& [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
          if (from != w) continue;
          const unsigned np = antonym ? 3u - pol : pol;
          reach[to] |= np;
          next.push_back({to, np});
        }
      }
    }
    walkers = std::move(next);
  }
  return reach;
}

TEST(Propagate, SharedSynonymIsQuarantined) {
  ThesaurusGraph g;
  g.add_edge("a", "c", Relation::synonym);
  g.add_edge("b", "c", Relation::synonym);
  const SeedSets seeds{{"a"}, {"b"}, {}};
  const auto out = propagate(seeds, g, 1);

  const auto oracle = walk_polarities(seeds, {{"a", "c", false}, {"b", "c", false}}, 1);
  ASSERT_EQ(oracle.at("c"), 3u);
  EXPECT_TRUE(out.conflicts.count("c"));
  EXPECT_FALSE(out.positive.count("c"));
  EXPECT_FALSE(out.negative.count("c"));
  EXPECT_EQ(out.positive, std::set<std::string>{"a"});
  EXPECT_EQ(out.negative, std::set<std::string>{"b"});
}

TEST(Propagate, MatchesWalkOracleOnRandomGraphsAtDepthOne) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> word(0, 11), coin(0, 1), nedges(0, 20);
  for (int trial = 0; trial < 300; ++trial) {
    SeedSets seeds;
    for (int i = 0; i < 3; ++i) {
      const auto w = "w" + std::to_string(word(rng));
      if (!seeds.labeled(w)) (coin(rng) ? seeds.positive : seeds.negative).insert(w);
    }
    std::vector<std::tuple<std::string, std::string, bool>> edges;
    ThesaurusGraph g;
    for (int e = nedges(rng); e > 0; --e) {
      const auto a = "w" + std::to_string(word(rng));
      const auto b = "w" + std::to_string(word(rng));
      const bool ant = coin(rng);
      if (a == b) continue;
      edges.emplace_back(a, b, ant);
      g.add_edge(a, b, ant ? Relation::antonym : Relation::synonym);
    }
    const auto out = propagate(seeds, g, 1);
    const auto reach = walk_polarities(seeds, edges, 1);
    for (const auto& [w, pols] : reach) {
      if (seeds.labeled(w)) {
        EXPECT_EQ(out.positive.count(w), seeds.positive.count(w));
        continue;
      }
      EXPECT_EQ(out.conflicts.count(w), pols == 3u ? 1u : 0u) << w;
      EXPECT_EQ(out.positive.count(w), pols == 1u ? 1u : 0u) << w;
      EXPECT_EQ(out.negative.count(w), pols == 2u ? 1u : 0u) << w;
    }
  }
}

TEST(Propagate, LaterOppositeEvidenceQuarantines) {
  // x and y are labeled in round one with opposite polarities, then each
  // proposes its polarity to the other in round two.
  ThesaurusGraph g;
  g.add_edge("good", "x", Relation::synonym);
  g.add_edge("bad", "y", Relation::synonym);
  g.add_edge("y", "x", Relation::synonym);
  const auto out = propagate({{"good"}, {"bad"}, {}}, g, 2);
  EXPECT_TRUE(out.conflicts.count("x"));
  EXPECT_TRUE(out.conflicts.count("y"));
  EXPECT_TRUE(out.positive.count("good"));
  EXPECT_TRUE(out.negative.count("bad"));
}

TEST(Propagate, InvariantsAndClosureIdempotence) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> word(0, 15), coin(0, 1), nedges(0, 25);
  for (int trial = 0; trial < 200; ++trial) {
    ThesaurusGraph g;
    for (int e = nedges(rng); e > 0; --e) {
      g.add_edge("w" + std::to_string(word(rng)), "w" + std::to_string(word(rng)),
                 coin(rng) ? Relation::antonym : Relation::synonym);
    }
    SeedSets seeds{{"w0"}, {"w1"}, {}};
    const auto closed = propagate(seeds, g, 32);
    for (const auto& w : closed.positive) EXPECT_FALSE(closed.negative.count(w));
    for (const auto& w : closed.conflicts) EXPECT_FALSE(closed.labeled(w));
    EXPECT_TRUE(closed.positive.count("w0"));
    EXPECT_TRUE(closed.negative.count("w1"));
    // Once closure is reached a further pass adds nothing.
    EXPECT_EQ(propagate(closed, g, 32), closed);
    EXPECT_EQ(propagate(seeds, g, 33), closed);
  }
}

TEST(ScoreWord, SymmetricDistancesGiveHalf) {
  for (const auto o : {Orientation::literal, Orientation::proximal}) {
    const auto [p, n] = polarity_from_distances(0.2, 0.2, o);
    EXPECT_EQ(p, 0.5);
    EXPECT_EQ(n, 0.5);
  }
}

TEST(ScoreWord, OrientationArithmetic) {
  EXPECT_DOUBLE_EQ(polarity_from_distances(0.3, 0.1, Orientation::literal).first, 0.75);
  EXPECT_DOUBLE_EQ(polarity_from_distances(0.3, 0.1, Orientation::proximal).first, 0.25);
  EXPECT_EQ(polarity_from_distances(0.0, 0.0, Orientation::literal).first, 0.5);
}

TEST(ScoreWord, TwoDimensionalFixture) {
  EmbeddingTable t(2);
  t.insert("w", Eigen::Vector2d(1, 0));
  t.insert("p", Eigen::Vector2d(1, 0.1));
  t.insert("n", Eigen::Vector2d(-1, 0));
  const SeedSets seeds{{"p"}, {"n"}, {}};
  // Oracle, evaluated independently: d_pos = 1 - 1/sqrt(1.01), d_neg = 2.
  const double d_pos = 1.0 - 1.0 / std::sqrt(1.01);
  const double d_neg = 2.0;
  ExpansionConfig cfg;
  const auto s = score_word("w", seeds, t, cfg);
  EXPECT_NEAR(s.d_pos, d_pos, 1e-12);
  EXPECT_NEAR(s.d_neg, d_neg, 1e-12);
  EXPECT_NEAR(s.pos_score, d_neg / (d_pos + d_neg), 1e-9);
  EXPECT_NEAR(s.pos_score, 0.99752473723413815, 1e-9);
  EXPECT_EQ(s.pos_score + s.neg_score, 1.0);
  cfg.orientation = Orientation::literal;
  EXPECT_NEAR(score_word("w", seeds, t, cfg).pos_score, 0.002475262765861734, 1e-9);
}

TEST(ScoreWord, Errors) {
  EmbeddingTable t(2);
  t.insert("p", Eigen::Vector2d(1, 0));
  t.insert("w", Eigen::Vector2d(0, 1));
  ExpansionConfig cfg;
  EXPECT_THROW(score_word("absent", {{"p"}, {"n"}, {}}, t, cfg), UnscorableError);
  EXPECT_THROW(score_word("w", {{"p"}, {"n"}, {}}, t, cfg), InsufficientSeedsError);
  t.insert("n", Eigen::Vector2d(-1, 0));
  cfg.min_seed_hits = 2;
  EXPECT_THROW(score_word("w", {{"p"}, {"n"}, {}}, t, cfg), ConfigError);
}

TEST(ScoreWord, ExcludesItselfFromAverages) {
  EmbeddingTable t(2);
  t.insert("p1", Eigen::Vector2d(1, 0));
  t.insert("p2", Eigen::Vector2d(0.6, 0.8));
  t.insert("n", Eigen::Vector2d(-1, 0));
  const auto s = score_word("p1", {{"p1", "p2"}, {"n"}, {}}, t, {});
  EXPECT_NEAR(s.d_pos, 1.0 - 0.6, 1e-15);
}

TEST(ScoreWord, ReflectionAndScaleInvarianceProperty) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1), c(0.1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingTable t(3), scaled(3);
    const double k = c(rng);
    SeedSets seeds;
    for (int i = 0; i < 6; ++i) {
      Eigen::Vector3d v(u(rng), u(rng), u(rng));
      const auto w = "w" + std::to_string(i);
      t.insert(w, v);
      scaled.insert(w, v * k);
      if (i >= 1) (i % 2 ? seeds.positive : seeds.negative).insert(w);
    }
    ExpansionConfig lit, prox;
    lit.orientation = Orientation::literal;
    const auto a = score_word("w0", seeds, t, lit);
    const auto b = score_word("w0", seeds, t, prox);
    EXPECT_NEAR(a.pos_score + b.pos_score, 1.0, 1e-12);
    EXPECT_GE(b.pos_score, 0.0);
    EXPECT_LE(b.pos_score, 1.0);
    const auto s = score_word("w0", seeds, scaled, prox);
    EXPECT_NEAR(s.pos_score, b.pos_score, 1e-9);
    EXPECT_NEAR(s.d_pos, b.d_pos, 1e-9);
    EXPECT_NEAR(s.d_neg, b.d_neg, 1e-9);
  }
}

TEST(ExpandLexicon, CandidatesAlreadyPresent) {
  const auto lex = parse_lexicon(testing::kFixtureLexicon, "m");
  const auto out =
      expand_lexicon(lex, testing::fixture_thesaurus(), testing::fixture_embeddings(),
                     {"good", "meh"}, {});
  EXPECT_EQ(out.lexicon, lex);
  EXPECT_EQ(out.report.scored, 0u);
  EXPECT_EQ(out.report.skipped_existing, 2u);
}

TEST(ExpandLexicon, SingleCandidate) {
  const auto lex = parse_lexicon(testing::kFixtureLexicon, "m");
  const auto out = expand_lexicon(lex, testing::fixture_thesaurus(),
                                  testing::fixture_embeddings(), {"fine"}, {});
  EXPECT_EQ(out.lexicon.size(), lex.size() + 1);
  const auto* e = out.lexicon.find("fine");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->provenance, Provenance::expanded);
  EXPECT_NEAR(e->pos_score + e->neg_score, 1.0, 1e-12);
}

TEST(ExpandLexicon, TenWordFixtureMatchesHandTrace) {
  const auto lex = parse_lexicon(testing::kFixtureLexicon, "m");
  const auto out = expand_lexicon(lex, testing::fixture_thesaurus(),
                                  testing::fixture_embeddings(), testing::kFixtureCandidates, {});
  EXPECT_EQ(out.report.scored, 5u);
  EXPECT_EQ(out.report.skipped_existing, 1u);
  EXPECT_EQ(out.report.unscorable, 0u);
  EXPECT_EQ(out.report.positive, 3u);
  EXPECT_EQ(out.report.negative, 4u);
  EXPECT_EQ(out.lexicon.size(), 10u);
  for (const auto& [w, pos] : testing::kFixtureExpectedPos) {
    const auto* e = out.lexicon.find(w);
    ASSERT_NE(e, nullptr) << w;
    EXPECT_NEAR(e->pos_score, pos, 1e-9) << w;
    EXPECT_NEAR(e->neg_score, 1.0 - pos, 1e-9) << w;
    EXPECT_EQ(e->provenance, Provenance::expanded);
  }
  for (const auto& [w, e] : lex) EXPECT_EQ(*out.lexicon.find(w), e);
}

TEST(ExpandLexicon, UnembeddedCandidatesCounted) {
  const auto lex = parse_lexicon(testing::kFixtureLexicon, "m");
  const auto out = expand_lexicon(lex, testing::fixture_thesaurus(),
                                  testing::fixture_embeddings(), {"fine", "nowhere"}, {});
  EXPECT_EQ(out.report.scored, 1u);
  EXPECT_EQ(out.report.unscorable, 1u);
}

TEST(ExpandLexicon, NoSeedsPropagates) {
  const auto lex = lexicon_of({{"a", 0.2, 0.2}});
  EXPECT_THROW(expand_lexicon(lex, {}, testing::fixture_embeddings(), {"fine"}, {}), NoSeedsError);
}

TEST(ExpandLexicon, NonDestructiveProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1), s(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    SentiLexicon lex;
    EmbeddingTable t(4);
    std::set<std::string> cands;
    for (int i = 0; i < 20; ++i) {
      const auto w = "w" + std::to_string(i);
      t.insert(w, Eigen::Vector4d(u(rng), u(rng), u(rng), u(rng)));
      if (i < 8) {
        const bool pos = i % 2 == 0;
        lex.upsert({w, PosTag::noun, pos ? 0.6 + 0.4 * s(rng) : 0.0,
                    pos ? 0.0 : 0.6 + 0.4 * s(rng), "", Provenance::seed_file});
      }
      cands.insert(w);
    }
    const auto out = expand_lexicon(lex, {}, t, cands, {});
    for (const auto& [w, e] : lex) EXPECT_EQ(*out.lexicon.find(w), e);
    for (const auto& [w, e] : out.lexicon) {
      if (e.provenance != Provenance::expanded) continue;
      EXPECT_NEAR(e.pos_score + e.neg_score, 1.0, 1e-12);
      EXPECT_GE(e.pos_score, 0.0);
      EXPECT_LE(e.pos_score, 1.0);
    }
    EXPECT_EQ(out.lexicon.size(), 20u);
  }
}

}  // namespace
}  // namespace combvisa
