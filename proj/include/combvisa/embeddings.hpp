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

// Static word embeddings (word2vec text format), contextual encoder output
// matrices, and the pointwise distances used for polarity scoring.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "combvisa/error.hpp"
#include "combvisa/io.hpp"

namespace combvisa {

enum class DistanceMetric { cosine, euclidean };

/// Cosine distance is undefined for an all-zero argument.
class UndefinedDistance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// cosine: 1 - a.b / (|a||b|), in [0, 2]. euclidean: |a - b|.
inline double distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b, DistanceMetric metric) {
  if (a.size() != b.size()) {
    throw ShapeError(fmt::format("distance between vectors of length {} and {}", a.size(), b.size()));
  }
  if (metric == DistanceMetric::euclidean) return (a - b).norm();
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw UndefinedDistance("cosine distance with a zero vector");
  const double cos = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return 1.0 - cos;
}

class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 1) : dim_(dim) {
    if (dim == 0) throw ShapeError("embedding dim must be >= 1");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

  /// nullptr when the lemma has no vector.
  const Eigen::VectorXd* find(std::string_view lemma) const {
    const auto it = vectors_.find(lemma);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  void insert(std::string lemma, Eigen::VectorXd v) {
    if (static_cast<std::size_t>(v.size()) != dim_) {
      throw ShapeError(fmt::format("vector for '{}' has length {}, table dim is {}", lemma,
                                   v.size(), dim_));
    }
    vectors_.insert_or_assign(std::move(lemma), std::move(v));
  }

  const std::map<std::string, Eigen::VectorXd, std::less<>>& vectors() const { return vectors_; }

 private:
  std::size_t dim_;
  std::map<std::string, Eigen::VectorXd, std::less<>> vectors_;
};

/// Reads `count dim` then `lemma v1 .. v_dim` lines. Reads at most `count`
/// vectors; a count/line mismatch is reported through `warnings`.
inline EmbeddingTable load_embeddings(const std::filesystem::path& path,
                                      std::vector<std::string>* warnings = nullptr) {
  const std::string text = io::read_file(path);
  const std::string src = path.string();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& out) {
    if (pos >= text.size()) return false;
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    out = io::trim_cr(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string_view line;
  if (!next_line(line)) throw ParseError(src, 1, "missing 'count dim' header");
  const auto header = io::split_blank(line);
  const auto count = header.size() == 2 ? io::parse_int(header[0]) : std::nullopt;
  const auto dim = header.size() == 2 ? io::parse_int(header[1]) : std::nullopt;
  if (!count || !dim || *count < 0 || *dim < 1) {
    throw ParseError(src, 1, "header must be 'count dim' with dim >= 1");
  }

  EmbeddingTable table(static_cast<std::size_t>(*dim));
  std::size_t read = 0;
  while (read < static_cast<std::size_t>(*count) && next_line(line)) {
    const auto fields = io::split_blank(line);
    if (fields.empty()) continue;
    if (fields.size() != static_cast<std::size_t>(*dim) + 1) {
      throw ParseError(src, line_no,
                       fmt::format("expected {} values, got {}", *dim, fields.size() - 1));
    }
    Eigen::VectorXd v(*dim);
    for (long long k = 0; k < *dim; ++k) {
      const auto x = io::parse_double(fields[static_cast<std::size_t>(k) + 1]);
      if (!x) throw ParseError(src, line_no, fmt::format("bad value '{}'", fields[k + 1]));
      v[k] = *x;
    }
    table.insert(std::string(fields[0]), std::move(v));
    ++read;
  }
  std::string_view rest;
  bool extra = false;
  while (next_line(rest)) {
    if (!io::split_blank(rest).empty()) extra = true;
  }
  if (warnings && (read != static_cast<std::size_t>(*count) || extra)) {
    warnings->push_back(extra ? fmt::format("{}: header declares {} vectors, file has more", src,
                                            *count)
                              : fmt::format("{}: header declares {} vectors, file has {}", src,
                                            *count, read));
  }
  return table;
}

inline std::string format_embeddings(const EmbeddingTable& table) {
  std::string out = fmt::format("{} {}\n", table.size(), table.dim());
  for (const auto& [lemma, v] : table.vectors()) {
    out += lemma;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      out += ' ';
      out += io::format_double(v[k]);
    }
    out += '\n';
  }
  return out;
}

/// Per-token contextual vectors for one review, SL rows by h columns.
/// Row 0 is the classification-token slot.
struct EncoderOutput {
  Eigen::MatrixXd matrix;

  std::size_t seq_len() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t width() const { return static_cast<std::size_t>(matrix.cols()); }
};

inline EncoderOutput parse_encoder_output(std::string_view text, const std::string& src) {
  std::vector<std::string_view> lines;
  for (const auto l : io::split(text, '\n')) lines.push_back(io::trim_cr(l));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(src, 1, "missing 'SL h' header");

  const auto header = io::split_blank(lines[0]);
  const auto rows = header.size() == 2 ? io::parse_int(header[0]) : std::nullopt;
  const auto cols = header.size() == 2 ? io::parse_int(header[1]) : std::nullopt;
  if (!rows || !cols || *rows < 1 || *cols < 1) {
    throw ParseError(src, 1, "header must be 'SL h' with both >= 1");
  }
  if (lines.size() - 1 != static_cast<std::size_t>(*rows)) {
    throw ParseError(src, lines.size(),
                     fmt::format("declared {} rows, found {}", *rows, lines.size() - 1));
  }
  EncoderOutput out{Eigen::MatrixXd(*rows, *cols)};
  for (long long r = 0; r < *rows; ++r) {
    const std::size_t line_no = static_cast<std::size_t>(r) + 2;
    const auto fields = io::split_blank(lines[static_cast<std::size_t>(r) + 1]);
    if (fields.size() != static_cast<std::size_t>(*cols)) {
      throw ParseError(src, line_no,
                       fmt::format("expected {} columns, got {}", *cols, fields.size()));
    }
    for (long long c = 0; c < *cols; ++c) {
      const auto x = io::parse_double(fields[static_cast<std::size_t>(c)]);
      if (!x) throw ParseError(src, line_no, fmt::format("bad value '{}'", fields[c]));
      out.matrix(r, c) = *x;
    }
  }
  return out;
}

inline EncoderOutput load_encoder_output(const std::filesystem::path& path) {
  return parse_encoder_output(io::read_file(path), path.string());
}

inline std::string format_encoder_output(const EncoderOutput& enc) {
  std::string out = fmt::format("{} {}\n", enc.matrix.rows(), enc.matrix.cols());
  for (Eigen::Index r = 0; r < enc.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < enc.matrix.cols(); ++c) {
      if (c) out += ' ';
      out += io::format_double(enc.matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

/// Encoder-output container: `manifest.tsv` (sample_id \t file) plus one
/// `<sample_id>.mat` per review.
inline std::map<std::string, EncoderOutput> load_encoder_dir(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.tsv";
  const std::string text = io::read_file(manifest);
  std::map<std::string, EncoderOutput> out;
  std::size_t line_no = 0;
  for (const auto raw : io::split(text, '\n')) {
    ++line_no;
    const auto line = io::trim_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = io::split(line, '\t');
    if (cols.size() != 2) throw ParseError(manifest.string(), line_no, "expected 'id\\tfile'");
    out.insert_or_assign(std::string(cols[0]), load_encoder_output(dir / std::string(cols[1])));
  }
  return out;
}

inline void save_encoder_dir(const std::filesystem::path& dir,
                             const std::vector<std::pair<std::string, EncoderOutput>>& items) {
  std::string manifest = "# sample_id\tfile\n";
  for (const auto& [id, enc] : items) {
    const std::string file = id + ".mat";
    io::write_atomic(dir / file, format_encoder_output(enc));
    manifest += id + '\t' + file + '\n';
  }
  io::write_atomic(dir / "manifest.tsv", manifest);
}

/// Fallback encoder: zero row for the classification slot, then token
/// vectors in order (unknown tokens map to zero), padded or truncated to SL.
inline EncoderOutput encode_static(std::span<const std::string> tokens, const EmbeddingTable& table,
                                   std::size_t seq_len) {
  if (seq_len == 0) throw ShapeError("sequence length must be >= 1");
  EncoderOutput out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(seq_len),
                                          static_cast<Eigen::Index>(table.dim()))};
  for (std::size_t t = 0; t < tokens.size() && t + 1 < seq_len; ++t) {
    if (const auto* v = table.find(tokens[t])) {
      out.matrix.row(static_cast<Eigen::Index>(t + 1)) = v->transpose();
    }
  }
  return out;
}

}  // namespace combvisa
