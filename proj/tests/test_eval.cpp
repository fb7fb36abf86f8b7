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

#include "combvisa/eval.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "combvisa/dataset.hpp"
#include "combvisa/experiment.hpp"
#include "test_util.hpp"

namespace combvisa {
namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

TEST(Metrics, BinaryFixture) {
  // TP=3, FP=1, FN=1, TN=3 for class 0.
  const std::vector<int> gold{0, 0, 0, 0, 1, 1, 1, 1};
  const std::vector<int> pred{0, 0, 0, 1, 0, 1, 1, 1};
  const auto r = compute_metrics(pred, gold, 2);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[0].recall, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[0].f1, 0.75);
  EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
  EXPECT_EQ(r.confusion[0][1], 1u);
  EXPECT_EQ(r.confusion[1][0], 1u);
  EXPECT_EQ(r.samples, 8u);
}

TEST(Metrics, PublishedRowsAreHarmonicMeans) {
  struct Row {
    double p, r, f1;
  };
  // Precision / recall / F1 rows of the two published comparison tables.
  for (const auto& row : {Row{0.96, 0.94, 0.95}, Row{0.88, 0.86, 0.87}}) {
    const double f = f1_score(row.p, row.r);
    EXPECT_LT(std::abs(round2(f) - row.f1), 5e-3);
  }
  // Remaining rows only hold once the two-decimal rounding of P and R is
  // taken into account; 0.93/0.92 alone gives 0.92497.
  for (const auto& row : {Row{0.92, 0.90, 0.91}, Row{0.94, 0.92, 0.93}, Row{0.85, 0.85, 0.85},
                          Row{0.88, 0.90, 0.89}, Row{0.93, 0.92, 0.93}, Row{0.95, 0.94, 0.94}}) {
    EXPECT_LT(f1_score(row.p - 0.005, row.r - 0.005), row.f1 + 0.005);
    EXPECT_GE(f1_score(row.p + 0.005, row.r + 0.005), row.f1 - 0.005);
  }
  EXPECT_NEAR(f1_score(0.96, 0.94), 0.9498947368421052, 1e-12);
  EXPECT_EQ(f1_score(0, 0), 0.0);
}

TEST(Metrics, ZeroDenominators) {
  const std::vector<int> gold{0, 0, 0};
  const std::vector<int> pred{0, 0, 0};
  const auto r = compute_metrics(pred, gold, 3);
  EXPECT_EQ(r.per_class[1].precision, 0.0);
  EXPECT_EQ(r.per_class[1].recall, 0.0);
  EXPECT_EQ(r.per_class[1].f1, 0.0);
  EXPECT_DOUBLE_EQ(r.macro_f1, 1.0 / 3.0);
  const auto empty = compute_metrics(std::vector<int>{}, std::vector<int>{}, 2);
  EXPECT_EQ(empty.accuracy, 0.0);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(compute_metrics(std::vector<int>{0}, std::vector<int>{0, 1}, 2), DataError);
  EXPECT_THROW(compute_metrics(std::vector<int>{2}, std::vector<int>{0}, 2), DataError);
  EXPECT_THROW(compute_metrics(std::vector<int>{0}, std::vector<int>{-1}, 2), DataError);
}

TEST(Metrics, MatchesCountingOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 2;
    std::uniform_int_distribution<int> label(0, k - 1), len(0, 60);
    std::vector<int> gold(static_cast<std::size_t>(len(rng))), pred(gold.size());
    for (auto& g : gold) g = label(rng);
    for (auto& p : pred) p = label(rng);
    const auto r = compute_metrics(pred, gold, k);
    double macro_p = 0, macro_r = 0, macro_f = 0;
    std::size_t correct = 0, total = 0;
    for (int c = 0; c < k; ++c) {
      int tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        tp += pred[i] == c && gold[i] == c;
        fp += pred[i] == c && gold[i] != c;
        fn += pred[i] != c && gold[i] == c;
      }
      const double p = tp + fp ? double(tp) / (tp + fp) : 0.0;
      const double rc = tp + fn ? double(tp) / (tp + fn) : 0.0;
      const double f = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
      EXPECT_DOUBLE_EQ(r.per_class[c].precision, p);
      EXPECT_DOUBLE_EQ(r.per_class[c].recall, rc);
      EXPECT_DOUBLE_EQ(r.per_class[c].f1, f);
      macro_p += p / k;
      macro_r += rc / k;
      macro_f += f / k;
      for (int j = 0; j < k; ++j) total += r.confusion[c][j];
    }
    for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == pred[i];
    EXPECT_NEAR(r.macro_precision, macro_p, 1e-12);
    EXPECT_NEAR(r.macro_recall, macro_r, 1e-12);
    EXPECT_NEAR(r.macro_f1, macro_f, 1e-12);
    EXPECT_EQ(total, gold.size());
    EXPECT_DOUBLE_EQ(r.accuracy, gold.empty() ? 0.0 : double(correct) / gold.size());
    for (const auto& m : r.per_class) {
      EXPECT_LT(std::abs(round2(m.f1) - round2(f1_score(round2(m.precision), round2(m.recall)))),
                0.0101);
    }
  }
}

TEST(Metrics, ReportFormat) {
  const auto r = compute_metrics(std::vector<int>{0, 1}, std::vector<int>{0, 0}, 2);
  const std::vector<std::string> names{"POS", "NEG"};
  const auto text = format_report(r, names);
  EXPECT_NE(text.find("POS             1.00      0.50      0.67         2"), std::string::npos)
      << text;
  EXPECT_NE(text.find("accuracy 0.5000"), std::string::npos);
}

TEST(Stats, Cases) {
  const auto a = corpus_stats(std::vector<std::size_t>{2, 4, 6});
  EXPECT_DOUBLE_EQ(a.mean, 4);
  EXPECT_DOUBLE_EQ(a.std, 2);
  EXPECT_DOUBLE_EQ(a.p50, 4);
  const auto b = corpus_stats(std::vector<std::size_t>{5});
  EXPECT_EQ(b.std, 0.0);
  for (double v : {b.mean, b.min, b.p25, b.p50, b.p75, b.max}) EXPECT_EQ(v, 5.0);
  const auto c = corpus_stats(std::vector<std::size_t>{631, 1, 16, 31, 9});
  EXPECT_EQ(c.min, 1);
  EXPECT_EQ(c.p25, 9);
  EXPECT_EQ(c.p50, 16);
  EXPECT_EQ(c.p75, 31);
  EXPECT_EQ(c.max, 631);
  EXPECT_THROW(corpus_stats(std::vector<std::size_t>{}), DataError);
}

TEST(Stats, InterpolatesBetweenRanks) {
  const auto s = corpus_stats(std::vector<std::size_t>{1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.p25, 1.75);
  EXPECT_DOUBLE_EQ(s.p50, 2.5);
  EXPECT_DOUBLE_EQ(s.p75, 3.25);
}

TEST(Stats, OrderedProperty) {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<std::size_t> len(1, 50), val(0, 700);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::size_t> v(len(rng));
    for (auto& x : v) x = val(rng);
    const auto s = corpus_stats(v);
    EXPECT_LE(s.min, s.p25);
    EXPECT_LE(s.p25, s.p50);
    EXPECT_LE(s.p50, s.p75);
    EXPECT_LE(s.p75, s.max);
    EXPECT_GE(s.std, 0.0);
  }
}

TEST(Stats, TextHasSevenFields) {
  const auto text = corpus_stats(std::vector<std::size_t>{1, 9, 16, 31, 631}).to_text();
  EXPECT_EQ(text, "Mean\t137.60\nStd\t276.04\nMin\t1\n25%\t9\n50%\t16\n75%\t31\nMax\t631\n");
}

TEST(Dataset, ParseInferredAndDeclared) {
  const auto ds = parse_dataset("POS\trất tốt\n# comment\nNEG\ttệ quá\r\nNEU\tbình thường\n", "d");
  EXPECT_EQ(ds.labels.names(), (std::vector<std::string>{"NEG", "NEU", "POS"}));
  ASSERT_EQ(ds.rows.size(), 3u);
  EXPECT_EQ(ds.rows[0].label, 2);
  EXPECT_EQ(ds.rows[1].text, "tệ quá");
  const auto declared = parse_dataset("POS\ta\nNEG\tb\n", "d", LabelSet::parse("POS,NEG,NEU"));
  EXPECT_EQ(declared.rows[1].label, 1);
  EXPECT_EQ(declared.labels.size(), 3u);
  EXPECT_EQ(format_dataset(declared), "POS\ta\nNEG\tb\n");
}

TEST(Dataset, Errors) {
  try {
    parse_dataset("POS\ta\nBAD\tb\n", "d.tsv", LabelSet::parse("POS,NEG"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.path(), "d.tsv");
  }
  EXPECT_THROW(parse_dataset("POS a\n", "d"), ParseError);
  EXPECT_THROW(LabelSet::parse("POS,POS"), ConfigError);
}

TEST(Synthetic, LabelsFollowLexiconAndNegators) {
  SyntheticConfig cfg;
  cfg.samples = 300;
  cfg.seed = 4;
  const auto corpus = generate_synthetic(cfg);
  ASSERT_EQ(corpus.data.rows.size(), 300u);
  const auto neg = NegatorSet::defaults();
  std::size_t negated = 0;
  for (const auto& row : corpus.data.rows) {
    const auto raw = collect_senti_evidence(tokenize(row.text), corpus.lexicon, neg, 2);
    double net = 0;
    for (std::size_t i = 0; i < raw.pos_vec.size(); ++i) net += raw.pos_vec[i] - raw.neg_vec[i];
    EXPECT_GE(std::abs(net), cfg.min_margin);
    EXPECT_EQ(row.label, net > 0 ? 0 : 1) << row.text;
    negated += row.text.find("không") != std::string::npos ||
               row.text.find("chẳng") != std::string::npos;
  }
  EXPECT_GT(negated, 50u);
  EXPECT_EQ(format_dataset(generate_synthetic(cfg).data), format_dataset(corpus.data));
}

ExperimentConfig quick_config() {
  ExperimentConfig cfg;
  cfg.model.lstm_hidden = 4;
  cfg.model.filters = 4;
  cfg.model.d_lm = 4;
  cfg.model.d_sw = 4;
  cfg.model.fusion_hidden = {4};
  cfg.train.epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.accumulation_steps = 1;
  cfg.senti.length = 8;
  cfg.seq_len = 8;
  cfg.zero_dim = 3;
  return cfg;
}

TEST(Experiment, TwoVariantsWithDeltas) {
  SyntheticConfig sc;
  sc.samples = 40;
  sc.seed = 1;
  const auto train_c = generate_synthetic(sc);
  sc.seed = 2;
  sc.samples = 20;
  const auto test_c = generate_synthetic(sc);
  auto cfg = quick_config();
  cfg.seeds = {1, 2};
  cfg.out_dir = testing::scratch_dir("exp2");
  const auto table = run_experiment(train_c.data, test_c.data, train_c.lexicon,
                                    NegatorSet::defaults(), EmbeddingTable(3), cfg);
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0].per_seed.size(), 2u);
  const auto text = table.to_text();
  EXPECT_NE(text.find("dF1"), std::string::npos);
  EXPECT_NE(text.find("rcnn+sentivec"), std::string::npos);
  for (const char* f : {"comparison.txt", "comparison.csv", "rcnn-only_seed1.ckpt",
                        "rcnn+sentivec_seed2.history.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(cfg.out_dir / f)) << f;
  }
  EXPECT_EQ(io::read_file(cfg.out_dir / "comparison.txt"), text);
  // Same inputs and seeds, same table.
  cfg.out_dir.clear();
  EXPECT_EQ(run_experiment(train_c.data, test_c.data, train_c.lexicon, NegatorSet::defaults(),
                           EmbeddingTable(3), cfg)
                .to_csv(),
            table.to_csv());
}

TEST(Experiment, SingleVariantHasNoDeltas) {
  SyntheticConfig sc;
  sc.samples = 20;
  const auto c = generate_synthetic(sc);
  auto cfg = quick_config();
  cfg.variants = {"static+lstm"};
  const auto table =
      run_experiment(c.data, c.data, c.lexicon, NegatorSet::defaults(), EmbeddingTable(3), cfg);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.to_text().find("dF1"), std::string::npos);
}

TEST(Experiment, UnknownVariant) {
  auto cfg = quick_config();
  cfg.variants = {"rcnn-only", "bert"};
  EXPECT_THROW(run_experiment({}, {}, {}, NegatorSet::defaults(), EmbeddingTable(3), cfg),
               ConfigError);
}

TEST(Experiment, MissingInputsListed) {
  auto cfg = quick_config();
  const auto dir = testing::scratch_dir("exp_missing");
  cfg.train_path = dir / "train.tsv";
  testing::write_file(cfg.train_path, "POS\tx\n");
  cfg.test_path = dir / "nope.tsv";
  try {
    run_experiment(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("test dataset"), std::string::npos);
    EXPECT_NE(msg.find("lexicon (not set)"), std::string::npos);
    EXPECT_EQ(msg.find("train dataset"), std::string::npos);
  }
}

TEST(Experiment, FileBasedRun) {
  const auto dir = testing::scratch_dir("exp_files");
  SyntheticConfig sc;
  sc.samples = 24;
  const auto c = generate_synthetic(sc);
  auto cfg = quick_config();
  cfg.train_path = testing::write_file(dir / "train.tsv", format_dataset(c.data));
  cfg.test_path = testing::write_file(dir / "test.tsv", format_dataset(c.data));
  cfg.lexicon_path = dir / "lex.tsv";
  save_lexicon(c.lexicon, cfg.lexicon_path);
  cfg.labels = {"POS", "NEG"};
  const auto table = run_experiment(cfg);
  EXPECT_EQ(table.rows.size(), 2u);
}

}  // namespace
}  // namespace combvisa
