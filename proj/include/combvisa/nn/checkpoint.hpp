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

// Text checkpoints:
//
//   combvisa-checkpoint 1
//   config <key> <value>        architecture, one line per field
//   meta <key> <value>          free-form run metadata
//   tensor <name> <rows> <cols>
//   <rows lines of cols row-major values>
//   end

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "combvisa/io.hpp"
#include "combvisa/nn/model.hpp"

namespace combvisa::nn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  CombVisaModel model;
  std::map<std::string, std::string> meta;
};

namespace detail {

inline std::string join_widths(const std::vector<Index>& w) {
  if (w.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(w[i]);
  }
  return out;
}

inline std::vector<Index> parse_widths(std::string_view s) {
  std::vector<Index> out;
  if (s == "-") return out;
  for (const auto part : io::split(s, ',')) {
    const auto v = io::parse_int(part);
    if (!v) throw ConfigError(fmt::format("bad width list '{}'", s));
    out.push_back(static_cast<Index>(*v));
  }
  return out;
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> config_fields(const ModelConfig& c) {
  return {
      {"encoder", c.encoder == EncoderKind::rcnn ? "rcnn" : "lstm"},
      {"use_sentivec", c.use_sentivec ? "1" : "0"},
      {"input_dim", std::to_string(c.input_dim)},
      {"lstm_hidden", std::to_string(c.lstm_hidden)},
      {"filters", std::to_string(c.filters)},
      {"d_lm", std::to_string(c.d_lm)},
      {"d_sw", std::to_string(c.d_sw)},
      {"lm_hidden", detail::join_widths(c.lm_hidden)},
      {"sw_hidden", detail::join_widths(c.sw_hidden)},
      {"fusion_hidden", detail::join_widths(c.fusion_hidden)},
      {"senti_len", std::to_string(c.senti_len)},
      {"class_count", std::to_string(c.class_count)},
  };
}

inline std::string format_checkpoint(const Checkpoint& ckpt) {
  std::string out = fmt::format("combvisa-checkpoint {}\n", kCheckpointVersion);
  for (const auto& [k, v] : config_fields(ckpt.model.config)) out += "config " + k + ' ' + v + '\n';
  for (const auto& [k, v] : ckpt.meta) out += "meta " + k + ' ' + v + '\n';
  for_each_tensor(
      [&](const std::string& name, const auto& t) {
        out += fmt::format("tensor {} {} {}\n", name, t.rows(), t.cols());
        for (Index r = 0; r < t.rows(); ++r) {
          for (Index c = 0; c < t.cols(); ++c) {
            if (c) out += ' ';
            out += io::format_double(t(r, c));
          }
          out += '\n';
        }
      },
      ckpt.model);
  out += "end\n";
  return out;
}

inline void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  io::write_atomic(path, format_checkpoint(ckpt));
}

inline Checkpoint parse_checkpoint(std::string_view text, const std::string& src) {
  std::vector<std::string_view> lines;
  for (const auto l : io::split(text, '\n')) lines.push_back(io::trim_cr(l));
  std::size_t at = 0;
  auto fail = [&](const std::string& what) -> ParseError { return ParseError(src, at + 1, what); };

  if (lines.empty() || lines[0] != fmt::format("combvisa-checkpoint {}", kCheckpointVersion)) {
    throw fail("not a version-1 combvisa checkpoint");
  }
  ++at;

  ModelConfig cfg;
  std::map<std::string, std::string> meta;
  while (at < lines.size() && (lines[at].starts_with("config ") || lines[at].starts_with("meta "))) {
    const auto line = lines[at];
    const auto sp1 = line.find(' ');
    const auto sp2 = line.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos) throw fail("expected '<kind> <key> <value>'");
    const std::string key(line.substr(sp1 + 1, sp2 - sp1 - 1));
    const std::string value(line.substr(sp2 + 1));
    if (line.starts_with("meta ")) {
      meta[key] = value;
      ++at;
      continue;
    }
    const auto as_int = [&]() {
      const auto v = io::parse_int(value);
      if (!v) throw fail(fmt::format("config {} is not an integer", key));
      return static_cast<Index>(*v);
    };
    if (key == "encoder") {
      if (value != "rcnn" && value != "lstm") throw fail("unknown encoder " + value);
      cfg.encoder = value == "rcnn" ? EncoderKind::rcnn : EncoderKind::lstm;
    } else if (key == "use_sentivec") {
      cfg.use_sentivec = as_int() != 0;
    } else if (key == "input_dim") {
      cfg.input_dim = as_int();
    } else if (key == "lstm_hidden") {
      cfg.lstm_hidden = as_int();
    } else if (key == "filters") {
      cfg.filters = as_int();
    } else if (key == "d_lm") {
      cfg.d_lm = as_int();
    } else if (key == "d_sw") {
      cfg.d_sw = as_int();
    } else if (key == "lm_hidden") {
      cfg.lm_hidden = detail::parse_widths(value);
    } else if (key == "sw_hidden") {
      cfg.sw_hidden = detail::parse_widths(value);
    } else if (key == "fusion_hidden") {
      cfg.fusion_hidden = detail::parse_widths(value);
    } else if (key == "senti_len") {
      cfg.senti_len = as_int();
    } else if (key == "class_count") {
      cfg.class_count = as_int();
    } else {
      throw fail("unknown config key " + key);
    }
    ++at;
  }

  Checkpoint ckpt{CombVisaModel::zeros(cfg), std::move(meta)};
  for_each_tensor(
      [&](const std::string& name, auto& t) {
        if (at >= lines.size()) throw fail("missing tensor " + name);
        const auto head = io::split_blank(lines[at]);
        if (head.size() != 4 || head[0] != "tensor" || head[1] != name) {
          throw fail("expected tensor " + name);
        }
        const auto rows = io::parse_int(head[2]);
        const auto cols = io::parse_int(head[3]);
        if (!rows || !cols || *rows != t.rows() || *cols != t.cols()) {
          throw fail(fmt::format("tensor {} has shape {}x{}, expected {}x{}", name, head[2],
                                 head[3], t.rows(), t.cols()));
        }
        ++at;
        for (Index r = 0; r < t.rows(); ++r, ++at) {
          if (at >= lines.size()) throw fail("truncated tensor " + name);
          const auto vals = io::split_blank(lines[at]);
          if (static_cast<Index>(vals.size()) != t.cols()) throw fail("wrong value count");
          for (Index c = 0; c < t.cols(); ++c) {
            const auto v = io::parse_double(vals[static_cast<std::size_t>(c)]);
            if (!v) throw fail("bad value");
            t(r, c) = *v;
          }
        }
      },
      ckpt.model);
  if (at >= lines.size() || lines[at] != "end") throw fail("missing 'end'");
  return ckpt;
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return parse_checkpoint(io::read_file(path), path.string());
}

}  // namespace combvisa::nn
