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

// combvisa command-line front end.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error
// (malformed or inconsistent input files; messages carry file:line).

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "combvisa/combvisa.hpp"

namespace {

using namespace combvisa;
namespace fs = std::filesystem;

constexpr int kUsage = 1;
constexpr int kData = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
std::vector<T> parse_list(const std::string& csv, const char* what) {
  std::vector<T> out;
  if (csv.empty()) return out;
  for (const auto part : io::split(csv, ',')) {
    const auto v = io::parse_int(part);
    if (!v || *v < 0) throw UsageError(fmt::format("bad {} list '{}'", what, csv));
    out.push_back(static_cast<T>(*v));
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
  std::vector<std::string> out;
  if (csv.empty()) return out;
  for (const auto part : io::split(csv, ',')) out.emplace_back(part);
  return out;
}

// ---- config files ----------------------------------------------------------

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

/// Appends `--key value` for every key of the subcommand's `--config` file
/// that is not already on the command line, so flags win.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  if (args.empty() || args.front().starts_with("-")) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args.front());
  if (!sub) return args;
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  const std::string text = io::read_file(path);
  std::size_t line_no = 0;
  for (const auto raw : io::split(text, '\n')) {
    ++line_no;
    auto line = io::trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(path, line_no, "expected key=value");
    const std::string key(line.substr(0, eq));
    const std::string value(line.substr(eq + 1));
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt || key == "config") {
      throw UsageError(fmt::format("{}:{}: unknown key '{}' for {}", path, line_no, key,
                                   sub->get_name()));
    }
    if (given_on_command_line(args, flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (value == "true") args.push_back(flag);
    } else if (!value.empty()) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

/// key=value lines for every option of `sub`; replaying them through
/// `--config` repeats the run.
std::string effective_config(const CLI::App& sub) {
  std::string out = fmt::format("# combvisa {}\n", sub.get_name());
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || opt->get_lnames().empty()) continue;
    std::string value;
    if (opt->get_expected_max() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    out += name + '=' + value + '\n';
  }
  return out;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  fs::path p = out;
  p += suffix;
  return p;
}

// ---- shared pieces ---------------------------------------------------------

struct EncoderSource {
  std::string encoder_dir;
  std::string embeddings;
  std::size_t zero_dim = 8;
  std::size_t seq_len = 64;

  void add_options(CLI::App* app) {
    app->add_option("--encoder-dir", encoder_dir,
                    "Precomputed encoder outputs (manifest.tsv + <row>.mat)");
    app->add_option("--embeddings", embeddings, "word2vec text embeddings for a static encoder");
    app->add_option("--zero-dim", zero_dim,
                    "Width of the zero-information encoder used when neither source is given");
    app->add_option("--seq-len", seq_len, "Rows per encoder matrix for the static encoder");
  }
};

struct SentiOptions {
  std::string lexicon;
  std::string negators;
  std::size_t length = 128;
  std::size_t window = 2;

  void add_options(CLI::App* app, bool lexicon_required) {
    auto* o = app->add_option("--lexicon", lexicon, "Sentiment lexicon TSV");
    if (lexicon_required) o->required();
    app->add_option("--negators", negators, "Negator patterns, one per line (default list otherwise)");
    app->add_option("--L", length, "Sentiment vector length");
    app->add_option("--window", window, "Negation window in tokens");
  }

  NegatorSet load_negator_set() const {
    return negators.empty() ? NegatorSet::defaults() : load_negators(negators);
  }
  SentiVecConfig config() const { return {length, window}; }
};

std::vector<nn::Sample> make_samples(const Dataset& ds, const SentiLexicon& lexicon,
                                     const NegatorSet& negators, const SentiVecConfig& senti,
                                     const EncoderSource& enc) {
  if (!enc.encoder_dir.empty()) {
    const auto mats = load_encoder_dir(enc.encoder_dir);
    std::vector<nn::Sample> out;
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
      const auto it = mats.find(std::to_string(i));
      if (it == mats.end()) {
        throw DataError(fmt::format("{}: no encoder output for row {}", enc.encoder_dir, i));
      }
      out.push_back({it->second,
                     extract_senti_vectors(tokenize(ds.rows[i].text), lexicon, negators, senti),
                     ds.rows[i].label});
    }
    return out;
  }
  const auto table = enc.embeddings.empty() ? EmbeddingTable(enc.zero_dim)
                                            : load_embeddings(enc.embeddings);
  return build_samples(ds, lexicon, negators, table, senti, enc.seq_len);
}

struct ModelOptions {
  std::string variant = "rcnn+sentivec";
  nn::Index hidden = 64;
  nn::Index filters = 64;
  nn::Index d_lm = 64;
  nn::Index d_sw = 64;
  std::string lm_hidden;
  std::string sw_hidden;
  std::string fusion_hidden = "64";

  void add_options(CLI::App* app, bool with_variant) {
    if (with_variant) {
      app->add_option("--variant", variant, "static+lstm | rcnn-only | rcnn+sentivec");
    }
    app->add_option("--hidden", hidden, "LSTM hidden width");
    app->add_option("--filters", filters, "RCNN filter count");
    app->add_option("--d-lm", d_lm, "LMVec width");
    app->add_option("--d-sw", d_sw, "SWVec width");
    app->add_option("--lm-hidden", lm_hidden, "Hidden widths of the LMVec head, comma-separated");
    app->add_option("--sw-hidden", sw_hidden, "Hidden widths of the SWVec head, comma-separated");
    app->add_option("--fusion-hidden", fusion_hidden,
                    "Hidden widths of the fusion MLP, comma-separated");
  }

  nn::ModelConfig config() const {
    nn::ModelConfig c;
    c.lstm_hidden = hidden;
    c.filters = filters;
    c.d_lm = d_lm;
    c.d_sw = d_sw;
    c.lm_hidden = parse_list<nn::Index>(lm_hidden, "width");
    c.sw_hidden = parse_list<nn::Index>(sw_hidden, "width");
    c.fusion_hidden = parse_list<nn::Index>(fusion_hidden, "width");
    return c;
  }
};

struct TrainOptions {
  std::size_t batch_size = 24;
  std::size_t epochs = 20;
  double lr = 1e-3;
  std::size_t accumulation = 16;
  std::string optimizer = "adam";
  double init_scale = 0.08;

  void add_options(CLI::App* app) {
    app->add_option("--batch-size", batch_size, "Mini-batch size");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--lr", lr, "Learning rate");
    app->add_option("--accumulation-steps", accumulation,
                    "Mini-batches per parameter update");
    app->add_option("--optimizer", optimizer, "adam | sgd")
        ->check(CLI::IsMember({"adam", "sgd"}));
    app->add_option("--init-scale", init_scale, "Uniform init range [-s, s]");
  }

  nn::TrainConfig config(std::uint64_t seed) const {
    nn::TrainConfig c;
    c.batch_size = batch_size;
    c.epochs = epochs;
    c.learning_rate = lr;
    c.accumulation_steps = accumulation;
    c.optimizer = optimizer == "sgd" ? nn::OptimizerKind::sgd : nn::OptimizerKind::adam;
    c.init_scale = init_scale;
    c.rng_seed = seed;
    return c;
  }
};

// ---- subcommands -----------------------------------------------------------

struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
};

Command expand_lexicon_cmd(CLI::App& root) {
  struct Opts {
    std::string lexicon, thesaurus, embeddings, candidates, out, report;
    double threshold = 0.5;
    int depth = 1;
    std::string metric = "cosine", orientation = "proximal";
    std::size_t min_seed_hits = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("expand-lexicon", "Grow a lexicon with scored candidates");
  app->add_option("--lexicon", o->lexicon, "Seed lexicon TSV")->required();
  app->add_option("--thesaurus", o->thesaurus, "Synonym/antonym TSV (a\\tb\\tsyn|ant)");
  app->add_option("--embeddings", o->embeddings, "word2vec text embeddings")->required();
  app->add_option("--candidates", o->candidates, "Candidate words, one per line")->required();
  app->add_option("--T,--threshold", o->threshold, "Seed threshold");
  app->add_option("--depth", o->depth, "Propagation rounds");
  app->add_option("--metric", o->metric, "cosine | euclidean")
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  app->add_option("--orientation", o->orientation, "proximal | literal")
      ->check(CLI::IsMember({"proximal", "literal"}));
  app->add_option("--min-seed-hits", o->min_seed_hits, "Embedded seeds needed per side");
  app->add_option("--out", o->out, "Expanded lexicon TSV")->required();
  app->add_option("--report", o->report, "Report path (default <out>.report)");
  return {app, [o, app] {
            ExpansionConfig cfg;
            cfg.threshold = o->threshold;
            cfg.depth = o->depth;
            cfg.metric = o->metric == "cosine" ? DistanceMetric::cosine : DistanceMetric::euclidean;
            cfg.orientation =
                o->orientation == "literal" ? Orientation::literal : Orientation::proximal;
            cfg.min_seed_hits = o->min_seed_hits;
            const auto lex = load_lexicon(o->lexicon);
            const auto graph = o->thesaurus.empty() ? ThesaurusGraph{} : load_thesaurus(o->thesaurus);
            std::vector<std::string> warnings;
            const auto table = load_embeddings(o->embeddings, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
            const auto result = expand_lexicon(lex, graph, table, load_candidates(o->candidates), cfg);
            const fs::path out = o->out;
            save_lexicon(result.lexicon, out);
            const auto report = result.report.to_text();
            io::write_atomic(o->report.empty() ? sibling(out, ".report") : fs::path(o->report),
                             report);
            io::write_atomic(sibling(out, ".config"), effective_config(*app));
            std::cout << report;
          }};
}

Command extract_sentivec_cmd(CLI::App& root) {
  struct Opts {
    std::string dataset, out;
    SentiOptions senti;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("extract-sentivec", "Per-review PosVec/NegVec as TSV");
  app->add_option("--dataset", o->dataset, "label\\ttext TSV")->required();
  o->senti.add_options(app, true);
  app->add_option("--out", o->out, "Output TSV (id\\tpos_csv\\tneg_csv)")->required();
  return {app, [o, app] {
            const auto lex = load_lexicon(o->senti.lexicon);
            const auto negators = o->senti.load_negator_set();
            const auto ds = load_dataset(o->dataset);
            std::string out;
            for (std::size_t i = 0; i < ds.rows.size(); ++i) {
              const auto v = extract_senti_vectors(tokenize(ds.rows[i].text), lex, negators,
                                                   o->senti.config());
              out += fmt::format("{}\t{}\t{}\n", i, format_vector_csv(v.pos_vec),
                                 format_vector_csv(v.neg_vec));
            }
            io::write_atomic(o->out, out);
            io::write_atomic(sibling(o->out, ".config"), effective_config(*app));
          }};
}

Command encode_cmd(CLI::App& root) {
  struct Opts {
    std::string dataset, embeddings, out_dir;
    std::size_t seq_len = 64;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("encode", "Static-embedding encoder outputs (SL x h per review)");
  app->add_option("--dataset", o->dataset, "label\\ttext TSV")->required();
  app->add_option("--embeddings", o->embeddings, "word2vec text embeddings")->required();
  app->add_option("--seq-len", o->seq_len, "Rows per matrix");
  app->add_option("--out-dir", o->out_dir, "Output directory")->required();
  return {app, [o, app] {
            const auto ds = load_dataset(o->dataset);
            const auto table = load_embeddings(o->embeddings);
            std::vector<std::pair<std::string, EncoderOutput>> items;
            for (std::size_t i = 0; i < ds.rows.size(); ++i) {
              items.emplace_back(std::to_string(i),
                                 encode_static(tokenize(ds.rows[i].text), table, o->seq_len));
            }
            save_encoder_dir(o->out_dir, items);
            io::write_atomic(fs::path(o->out_dir) / "encode.config", effective_config(*app));
          }};
}

Command train_cmd(CLI::App& root) {
  struct Opts {
    std::string dataset, labels, out_dir;
    std::uint64_t seed = 0;
    bool quiet = false;
    SentiOptions senti;
    EncoderSource enc;
    ModelOptions model;
    TrainOptions train;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("train", "Train one model variant");
  app->add_option("--dataset", o->dataset, "Training set, label\\ttext TSV")->required();
  app->add_option("--labels", o->labels, "Declared label set, e.g. POS,NEG,NEU");
  app->add_option("--seed", o->seed, "Initialization and shuffling seed")->required();
  o->senti.add_options(app, true);
  o->enc.add_options(app);
  o->model.add_options(app, true);
  o->train.add_options(app);
  app->add_option("--out-dir", o->out_dir, "Output directory")->required();
  app->add_flag("-q,--quiet", o->quiet, "No per-epoch progress");
  return {app, [o, app] {
            const auto ds = load_dataset(o->dataset, LabelSet(parse_names(o->labels)));
            const auto lex = load_lexicon(o->senti.lexicon);
            const auto samples =
                make_samples(ds, lex, o->senti.load_negator_set(), o->senti.config(), o->enc);
            auto mc = nn::apply_variant(o->model.config(), o->model.variant);
            mc.input_dim = samples.empty() ? 1 : samples.front().encoder.matrix.cols();
            mc.senti_len = static_cast<nn::Index>(o->senti.length);
            mc.class_count = static_cast<nn::Index>(ds.labels.size());
            auto model = nn::CombVisaModel::zeros(mc);
            auto cfg = o->train.config(o->seed);
            const auto history = nn::train(model, samples, cfg);
            if (!o->quiet) {
              for (const auto& e : history.epochs) {
                std::cerr << fmt::format("epoch {:>3}  loss {:.6f}  accuracy {:.4f}\n", e.epoch,
                                         e.loss, e.accuracy);
              }
            }
            const fs::path dir = o->out_dir;
            nn::Checkpoint ckpt{model,
                                {{"labels", ds.labels.to_csv()},
                                 {"seq_len", std::to_string(o->enc.seq_len)},
                                 {"negation_window", std::to_string(o->senti.window)},
                                 {"seed", std::to_string(o->seed)}}};
            nn::save_checkpoint(ckpt, dir / "model.ckpt");
            io::write_atomic(dir / "history.csv", history.to_csv());
            io::write_atomic(dir / "train.config", effective_config(*app));
          }};
}

Command evaluate_cmd(CLI::App& root) {
  struct Opts {
    std::string model, dataset, out, predictions;
    SentiOptions senti;
    EncoderSource enc;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("evaluate", "Precision/recall/F1 of a trained model");
  app->add_option("--model", o->model, "Checkpoint written by train")->required();
  app->add_option("--dataset", o->dataset, "Evaluation set, label\\ttext TSV")->required();
  o->senti.add_options(app, true);
  o->enc.add_options(app);
  app->add_option("--out", o->out, "Also write the report here");
  app->add_option("--predictions", o->predictions, "Write one predicted label per row");
  return {app, [o, app] {
            const auto ckpt = nn::load_checkpoint(o->model);
            const auto labels_it = ckpt.meta.find("labels");
            const LabelSet labels(labels_it == ckpt.meta.end()
                                      ? std::vector<std::string>{}
                                      : parse_names(labels_it->second));
            const auto ds = load_dataset(o->dataset, labels);
            const auto& mc = ckpt.model.config;
            if (ds.labels.size() != static_cast<std::size_t>(mc.class_count)) {
              throw DataError(fmt::format("{}: {} labels but the model has {} classes", o->dataset,
                                          ds.labels.size(), mc.class_count));
            }
            auto enc = o->enc;
            if (enc.embeddings.empty() && enc.encoder_dir.empty()) {
              enc.zero_dim = static_cast<std::size_t>(mc.input_dim);
            }
            auto senti = o->senti.config();
            senti.length = static_cast<std::size_t>(mc.senti_len);
            const auto samples =
                make_samples(ds, load_lexicon(o->senti.lexicon), o->senti.load_negator_set(),
                             senti, enc);
            const auto preds = nn::predict_all(ckpt.model, samples);
            std::vector<int> gold;
            for (const auto& s : samples) gold.push_back(s.label);
            const auto report =
                format_report(compute_metrics(preds, gold, static_cast<int>(mc.class_count)),
                              ds.labels.names());
            std::cout << report;
            if (!o->out.empty()) {
              io::write_atomic(o->out, report);
              io::write_atomic(sibling(o->out, ".config"), effective_config(*app));
            }
            if (!o->predictions.empty()) {
              std::string text;
              for (int p : preds) text += ds.labels.names()[static_cast<std::size_t>(p)] + '\n';
              io::write_atomic(o->predictions, text);
            }
          }};
}

Command stats_cmd(CLI::App& root) {
  struct Opts {
    std::string dataset, out;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("stats", "Token-count statistics of a dataset");
  app->add_option("--dataset", o->dataset, "label\\ttext TSV")->required();
  app->add_option("--out", o->out, "Also write the statistics here");
  return {app, [o, app] {
            const auto ds = load_dataset(o->dataset);
            std::vector<std::size_t> counts;
            for (const auto& r : ds.rows) counts.push_back(tokenize(r.text).size());
            if (counts.empty()) throw DataError(o->dataset + ": no rows");
            const auto text = corpus_stats(counts).to_text();
            std::cout << text;
            if (!o->out.empty()) {
              io::write_atomic(o->out, text);
              io::write_atomic(sibling(o->out, ".config"), effective_config(*app));
            }
          }};
}

Command gen_synthetic_cmd(CLI::App& root) {
  struct Opts {
    SyntheticConfig cfg;
    std::string out, lexicon_out, embeddings_out;
    std::size_t dim = 16;
    bool informative = false;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("gen-synthetic", "Lexicon-driven binary corpus");
  app->add_option("--samples", o->cfg.samples, "Number of reviews");
  app->add_option("--seed", o->cfg.seed, "Generator seed")->required();
  app->add_option("--negation-prob", o->cfg.negation_prob, "Chance a sentiment word is negated");
  app->add_option("--min-words", o->cfg.min_sentiment_words, "Sentiment words per review, min");
  app->add_option("--max-words", o->cfg.max_sentiment_words, "Sentiment words per review, max");
  app->add_option("--min-filler", o->cfg.min_filler, "Filler words per review, min");
  app->add_option("--max-filler", o->cfg.max_filler, "Filler words per review, max");
  app->add_option("--min-margin", o->cfg.min_margin, "Redraw reviews with |net polarity| below");
  app->add_option("--out", o->out, "Dataset TSV")->required();
  app->add_option("--lexicon-out", o->lexicon_out, "Also write the generating lexicon");
  app->add_option("--embeddings-out", o->embeddings_out, "Also write static embeddings");
  app->add_option("--embedding-dim", o->dim, "Width of the written embeddings");
  app->add_flag("--informative", o->informative,
                "Embeddings separate positive from negative words");
  return {app, [o, app] {
            const auto corpus = generate_synthetic(o->cfg);
            io::write_atomic(o->out, format_dataset(corpus.data));
            if (!o->lexicon_out.empty()) save_lexicon(corpus.lexicon, o->lexicon_out);
            if (!o->embeddings_out.empty()) {
              io::write_atomic(o->embeddings_out,
                               format_embeddings(synthetic_embeddings(o->dim, o->cfg.seed,
                                                                      o->informative)));
            }
            io::write_atomic(sibling(o->out, ".config"), effective_config(*app));
          }};
}

Command grad_check_cmd(CLI::App& root) {
  struct Opts {
    std::string model, out;
    std::string variant = "rcnn+sentivec";
    std::uint64_t seed = 0;
    nn::Index input_dim = 3, hidden = 4, width = 4, senti_len = 4, classes = 2, seq_len = 4;
    double init_scale = 1.0;
    nn::GradCheckOptions gc;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("grad-check", "Finite-difference check of the backward pass");
  app->add_option("--model", o->model, "Check this checkpoint instead of a fresh tiny model");
  app->add_option("--variant", o->variant, "Variant of the fresh model");
  app->add_option("--seed", o->seed, "Seed for the model and the random sample");
  app->add_option("--input-dim", o->input_dim, "Fresh model: encoder width");
  app->add_option("--hidden", o->hidden, "Fresh model: LSTM width");
  app->add_option("--width", o->width, "Fresh model: filters and head widths");
  app->add_option("--L", o->senti_len, "Fresh model: sentiment vector length");
  app->add_option("--classes", o->classes, "Fresh model: class count");
  app->add_option("--init-scale", o->init_scale, "Fresh model: uniform init range");
  app->add_option("--seq-len", o->seq_len, "Rows of the random encoder matrix");
  app->add_option("--epsilon", o->gc.epsilon, "Central-difference step");
  app->add_option("--sample-size", o->gc.sample_size,
                  "Coordinates checked on models above 20000 parameters");
  app->add_option("--out", o->out, "Also write the report here");
  return {app, [o, app] {
            nn::CombVisaModel model;
            if (!o->model.empty()) {
              model = nn::load_checkpoint(o->model).model;
            } else {
              nn::ModelConfig c;
              c.input_dim = o->input_dim;
              c.lstm_hidden = o->hidden;
              c.filters = c.d_lm = c.d_sw = o->width;
              c.fusion_hidden = {o->width};
              c.senti_len = o->senti_len;
              c.class_count = o->classes;
              model = nn::CombVisaModel::zeros(nn::apply_variant(c, o->variant));
              nn::initialize_uniform(model, o->seed, o->init_scale);
            }
            const auto& c = model.config;
            nn::Rng rng(o->seed ^ 0x5eedULL);
            nn::Sample s;
            s.encoder.matrix = nn::Matrix(o->seq_len, c.input_dim);
            for (nn::Index i = 0; i < s.encoder.matrix.size(); ++i) {
              s.encoder.matrix.data()[i] = rng.uniform(-1.0, 1.0);
            }
            for (auto* v : {&s.senti.pos_vec, &s.senti.neg_vec}) {
              v->resize(static_cast<std::size_t>(c.senti_len));
              for (auto& x : *v) x = rng.uniform();
            }
            s.label = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.class_count)));
            auto gc = o->gc;
            gc.seed = o->seed;
            const auto text = nn::grad_check(model, s, gc).to_text();
            std::cout << text;
            if (!o->out.empty()) {
              io::write_atomic(o->out, text);
              io::write_atomic(sibling(o->out, ".config"), effective_config(*app));
            }
          }};
}

Command experiment_cmd(CLI::App& root) {
  struct Opts {
    std::string train, test, labels, variants = "rcnn-only,rcnn+sentivec", seeds = "1", out_dir;
    SentiOptions senti;
    EncoderSource enc;
    ModelOptions model;
    TrainOptions train_opts;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("experiment", "Train and compare several variants");
  app->add_option("--train", o->train, "Training set TSV");
  app->add_option("--test", o->test, "Test set TSV");
  app->add_option("--labels", o->labels, "Declared label set, e.g. POS,NEG,NEU");
  app->add_option("--variants", o->variants, "Comma-separated variants; the first is the baseline");
  app->add_option("--seeds", o->seeds, "Comma-separated seeds; metrics are averaged");
  o->senti.add_options(app, false);
  app->add_option("--embeddings", o->enc.embeddings, "word2vec text embeddings");
  app->add_option("--zero-dim", o->enc.zero_dim, "Zero-information encoder width");
  app->add_option("--seq-len", o->enc.seq_len, "Rows per encoder matrix");
  o->model.add_options(app, false);
  o->train_opts.add_options(app);
  app->add_option("--out-dir", o->out_dir, "Output directory")->required();
  return {app, [o, app] {
            ExperimentConfig cfg;
            cfg.train_path = o->train;
            cfg.test_path = o->test;
            cfg.lexicon_path = o->senti.lexicon;
            cfg.embeddings_path = o->enc.embeddings;
            cfg.negators_path = o->senti.negators;
            cfg.labels = parse_names(o->labels);
            cfg.variants = parse_names(o->variants);
            cfg.seeds = parse_list<std::uint64_t>(o->seeds, "seed");
            cfg.model = o->model.config();
            cfg.train = o->train_opts.config(0);
            cfg.senti = o->senti.config();
            cfg.seq_len = o->enc.seq_len;
            cfg.zero_dim = o->enc.zero_dim;
            cfg.out_dir = o->out_dir;
            const auto table = run_experiment(cfg);
            io::write_atomic(fs::path(o->out_dir) / "experiment.config", effective_config(*app));
            std::cout << table.to_text();
          }};
}

int run(int argc, char** argv) {
  CLI::App app{"Sentiment lexicon expansion, sentiment vectors and CombViSA training",
               "combvisa"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::vector<Command> commands{expand_lexicon_cmd(app), extract_sentivec_cmd(app),
                                encode_cmd(app),         train_cmd(app),
                                evaluate_cmd(app),       stats_cmd(app),
                                gen_synthetic_cmd(app),  grad_check_cmd(app),
                                experiment_cmd(app)};
  for (auto& c : commands) {
    c.app->add_option("--config", "key=value file; command-line flags take precedence");
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    // Unreadable or malformed --config file.
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  for (auto& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      c.run();
      return 0;
    } catch (const UsageError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const NoSeedsError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
    } catch (const InsufficientSeedsError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kData;
    }
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
