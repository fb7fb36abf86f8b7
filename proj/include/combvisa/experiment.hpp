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

// Model-comparison harness: trains each architecture variant on identical
// inputs and seeds and tabulates precision / recall / F1.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "combvisa/dataset.hpp"
#include "combvisa/embeddings.hpp"
#include "combvisa/eval.hpp"
#include "combvisa/lexicon.hpp"
#include "combvisa/nn/checkpoint.hpp"
#include "combvisa/nn/train.hpp"
#include "combvisa/sentivec.hpp"

namespace combvisa {

/// Tokenizes, encodes (static table) and extracts sentiment vectors.
inline std::vector<nn::Sample> build_samples(const Dataset& ds, const SentiLexicon& lexicon,
                                             const NegatorSet& negators,
                                             const EmbeddingTable& table,
                                             const SentiVecConfig& senti, std::size_t seq_len) {
  std::vector<nn::Sample> out;
  out.reserve(ds.rows.size());
  for (const auto& row : ds.rows) {
    const auto tokens = tokenize(row.text);
    out.push_back({encode_static(tokens, table, seq_len),
                   extract_senti_vectors(tokens, lexicon, negators, senti), row.label});
  }
  return out;
}

struct ExperimentConfig {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path lexicon_path;
  /// Empty: a zero-information encoder (every token maps to zero) of
  /// width `zero_dim`.
  std::filesystem::path embeddings_path;
  std::filesystem::path negators_path;
  std::vector<std::string> labels;
  std::vector<std::string> variants{"rcnn-only", "rcnn+sentivec"};
  std::vector<std::uint64_t> seeds{1};
  nn::ModelConfig model;
  nn::TrainConfig train;
  SentiVecConfig senti;
  std::size_t seq_len = 32;
  std::size_t zero_dim = 8;
  /// When set, checkpoints and the comparison table are written here.
  std::filesystem::path out_dir;
};

struct VariantResult {
  std::string variant;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<EvalReport> per_seed;
};

struct ComparisonTable {
  std::vector<VariantResult> rows;

  std::string to_text() const {
    std::string out = fmt::format("{:<16} {:>9} {:>9} {:>9}", "model", "precision", "recall", "f1");
    if (rows.size() > 1) out += fmt::format(" {:>8} {:>8} {:>8}", "dP", "dR", "dF1");
    out += '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out += fmt::format("{:<16} {:>9.2f} {:>9.2f} {:>9.2f}", r.variant, r.precision, r.recall,
                         r.f1);
      if (i > 0) {
        const auto& base = rows.front();
        out += fmt::format(" {:>+8.2f} {:>+8.2f} {:>+8.2f}", r.precision - base.precision,
                           r.recall - base.recall, r.f1 - base.f1);
      }
      out += '\n';
    }
    return out;
  }

  std::string to_csv() const {
    std::string out = "model,precision,recall,f1,delta_precision,delta_recall,delta_f1\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      out += fmt::format("{},{},{},{}", r.variant, io::format_double(r.precision),
                         io::format_double(r.recall), io::format_double(r.f1));
      if (i > 0) {
        const auto& b = rows.front();
        out += fmt::format(",{},{},{}\n", io::format_double(r.precision - b.precision),
                           io::format_double(r.recall - b.recall), io::format_double(r.f1 - b.f1));
      } else {
        out += ",,,\n";
      }
    }
    return out;
  }
};

inline void validate_variants(const std::vector<std::string>& variants) {
  if (variants.empty()) throw ConfigError("no model variants requested");
  for (const auto& v : variants) (void)nn::apply_variant({}, v);
}

/// In-memory core of the harness. Metrics per variant are the means of the
/// per-seed macro scores.
inline ComparisonTable run_experiment(const Dataset& train_set, const Dataset& test_set,
                                      const SentiLexicon& lexicon, const NegatorSet& negators,
                                      const EmbeddingTable& table, const ExperimentConfig& cfg) {
  validate_variants(cfg.variants);
  if (cfg.seeds.empty()) throw ConfigError("no seeds given");
  const auto train_samples =
      build_samples(train_set, lexicon, negators, table, cfg.senti, cfg.seq_len);
  const auto test_samples = build_samples(test_set, lexicon, negators, table, cfg.senti, cfg.seq_len);
  std::vector<int> gold;
  for (const auto& s : test_samples) gold.push_back(s.label);

  ComparisonTable result;
  for (const auto& variant : cfg.variants) {
    nn::ModelConfig mc = nn::apply_variant(cfg.model, variant);
    mc.input_dim = static_cast<nn::Index>(table.dim());
    mc.senti_len = static_cast<nn::Index>(cfg.senti.length);
    mc.class_count = static_cast<nn::Index>(train_set.labels.size());
    VariantResult row{variant, 0.0, 0.0, 0.0, {}};
    for (const auto seed : cfg.seeds) {
      auto model = nn::CombVisaModel::zeros(mc);
      nn::TrainConfig tc = cfg.train;
      tc.rng_seed = seed;
      const auto history = nn::train(model, train_samples, tc);
      const auto preds = nn::predict_all(model, test_samples);
      row.per_seed.push_back(compute_metrics(preds, gold, static_cast<int>(mc.class_count)));
      if (!cfg.out_dir.empty()) {
        const std::string stem = fmt::format("{}_seed{}", variant, seed);
        nn::Checkpoint ckpt{model,
                            {{"labels", train_set.labels.to_csv()},
                             {"seq_len", std::to_string(cfg.seq_len)},
                             {"negation_window", std::to_string(cfg.senti.negation_window)}}};
        nn::save_checkpoint(ckpt, cfg.out_dir / (stem + ".ckpt"));
        io::write_atomic(cfg.out_dir / (stem + ".history.csv"), history.to_csv());
      }
    }
    for (const auto& r : row.per_seed) {
      row.precision += r.macro_precision;
      row.recall += r.macro_recall;
      row.f1 += r.macro_f1;
    }
    const double n = static_cast<double>(row.per_seed.size());
    row.precision /= n;
    row.recall /= n;
    row.f1 /= n;
    result.rows.push_back(std::move(row));
  }
  if (!cfg.out_dir.empty()) {
    io::write_atomic(cfg.out_dir / "comparison.txt", result.to_text());
    io::write_atomic(cfg.out_dir / "comparison.csv", result.to_csv());
  }
  return result;
}

/// File-based entry point; reports every missing input at once.
inline ComparisonTable run_experiment(const ExperimentConfig& cfg) {
  std::vector<std::string> missing;
  auto need = [&](const std::filesystem::path& p, const char* what) {
    if (p.empty()) {
      missing.push_back(fmt::format("{} (not set)", what));
    } else if (!std::filesystem::exists(p)) {
      missing.push_back(fmt::format("{} ({})", what, p.string()));
    }
  };
  need(cfg.train_path, "train dataset");
  need(cfg.test_path, "test dataset");
  need(cfg.lexicon_path, "lexicon");
  if (!cfg.embeddings_path.empty()) need(cfg.embeddings_path, "embeddings");
  if (!cfg.negators_path.empty()) need(cfg.negators_path, "negators");
  if (!missing.empty()) {
    std::string msg = "missing experiment inputs:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw ConfigError(msg);
  }
  validate_variants(cfg.variants);

  const LabelSet declared(cfg.labels);
  const auto train_set = load_dataset(cfg.train_path, declared);
  const auto test_set = load_dataset(cfg.test_path, train_set.labels);
  const auto lexicon = load_lexicon(cfg.lexicon_path);
  const auto negators =
      cfg.negators_path.empty() ? NegatorSet::defaults() : load_negators(cfg.negators_path);
  const auto table = cfg.embeddings_path.empty() ? EmbeddingTable(cfg.zero_dim)
                                                 : load_embeddings(cfg.embeddings_path);
  return run_experiment(train_set, test_set, lexicon, negators, table, cfg);
}

}  // namespace combvisa
