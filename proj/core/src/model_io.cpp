// Copyright 2026 The foresttune Authors.
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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "foresttune/error.hpp"
#include "foresttune/forest.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace {

constexpr const char* kMagic = "FORESTTUNE-MODEL";
constexpr const char* kVersion = "v1";
constexpr const char* kSeedMixing = "splitmix64-xoshiro256starstar";

[[noreturn]] void corrupt(const std::string& detail) {
  throw Error("forest", "corrupt model file: " + detail);
}

// Bytes outside printable ASCII, plus space and '%', become %XX. The empty
// string is written as "%-".
std::string escape(const std::string& text) {
  if (text.empty()) return "%-";
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (c > 0x20 && c < 0x7F && c != '%') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string unescape(const std::string& token) {
  if (token == "%-") return {};
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] != '%') {
      out.push_back(token[i]);
      continue;
    }
    if (i + 2 >= token.size()) corrupt("bad escape");
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(token.data() + i + 1, token.data() + i + 3, value, 16);
    if (ec != std::errc() || ptr != token.data() + i + 3) corrupt("bad escape");
    out.push_back(static_cast<char>(value));
    i += 2;
  }
  return out;
}

std::string fmt(double value) { return internal::format_number(value); }

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  // Next line split on single spaces; `keyword` must match the first token.
  std::vector<std::string> expect(const std::string& keyword) {
    std::string line;
    if (!std::getline(in_, line)) corrupt("truncated before '" + keyword + "'");
    ++line_number_;
    std::vector<std::string> tokens;
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) tokens.push_back(token);
    if (tokens.empty() || tokens[0] != keyword) {
      corrupt("line " + std::to_string(line_number_) + ": expected '" + keyword + "'");
    }
    return tokens;
  }

  bool at_end() {
    std::string rest;
    while (std::getline(in_, rest)) {
      if (!rest.empty()) return false;
    }
    return true;
  }

 private:
  std::istringstream in_;
  std::size_t line_number_ = 1;
};

template <typename T>
T parse_int(const std::string& token) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    corrupt("bad integer '" + token + "'");
  }
  return value;
}

double parse_real(const std::string& token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    corrupt("bad number '" + token + "'");
  }
  return value;
}

void need(const std::vector<std::string>& tokens, std::size_t count) {
  if (tokens.size() != count) {
    corrupt("'" + tokens[0] + "' has " + std::to_string(tokens.size() - 1) +
            " fields, expected " + std::to_string(count - 1));
  }
}

}  // namespace

std::string serialize_model(const Forest& forest) {
  std::ostringstream out;
  const Schema& schema = forest.schema();
  const HyperParams& params = forest.params();
  out << kMagic << ' ' << kVersion << '\n';
  out << "task " << task_name(schema.task) << '\n';
  out << "target " << escape(schema.target_name) << '\n';
  out << "classes " << schema.class_labels.size();
  for (const auto& label : schema.class_labels) out << ' ' << escape(label);
  out << '\n';
  out << "features " << schema.p() << '\n';
  for (std::size_t j = 0; j < schema.p(); ++j) {
    const ColumnType& type = schema.feature_types[j];
    out << "feature " << escape(schema.feature_names[j]);
    if (type.is_categorical()) {
      out << " categorical " << type.levels.size();
      for (const auto& level : type.levels) out << ' ' << escape(level);
    } else {
      out << " numeric";
    }
    out << '\n';
  }
  for (std::size_t j = 0; j < schema.p(); ++j) {
    const auto& ranks = forest.level_ranks()[j];
    if (ranks.empty()) continue;
    out << "ordering " << j;
    for (int r : ranks) out << ' ' << r;
    out << '\n';
  }
  out << "mtry " << params.mtry << '\n';
  out << "sample_fraction " << fmt(params.sample_fraction) << '\n';
  out << "replace " << (params.replace ? 1 : 0) << '\n';
  out << "min_node_size " << params.min_node_size << '\n';
  out << "num_trees " << params.num_trees << '\n';
  out << "split_rule " << params.split_rule.name() << ' '
      << params.split_rule.num_random_cuts << '\n';
  out << "max_depth " << (params.max_depth ? std::to_string(*params.max_depth) : "none") << '\n';
  out << "seed " << forest.seed() << ' ' << kSeedMixing << '\n';
  out << "training_rows " << forest.training_rows() << '\n';
  for (std::size_t t = 0; t < forest.num_trees(); ++t) {
    const Tree& tree = forest.trees()[t];
    const auto& bag = forest.bag(t);
    out << "tree " << t << ' ' << tree.nodes.size() << ' ' << tree.num_leaves() << ' '
        << tree.value_width << ' ' << bag.size() << '\n';
    for (const TreeNode& node : tree.nodes) {
      out << "n " << node.feature << ' ' << fmt(node.threshold) << ' ' << node.left << ' '
          << node.right << ' ' << node.leaf << ' ' << node.count << ' ' << node.depth << '\n';
    }
    for (std::size_t l = 0; l < tree.num_leaves(); ++l) {
      out << 'l';
      for (double v : tree.leaf_value(l)) out << ' ' << fmt(v);
      out << '\n';
    }
    out << 'b';
    for (std::uint32_t i : bag) out << ' ' << i;
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

Forest parse_model(const std::string& text) {
  {
    const std::string first = text.substr(0, text.find('\n'));
    const std::string prefix = std::string(kMagic) + ' ';
    if (first.rfind(prefix, 0) != 0) corrupt("missing FORESTTUNE-MODEL header");
    const std::string version = first.substr(prefix.size());
    if (version != kVersion) {
      throw Error("forest", "unsupported model version '" + version + "' (expected " +
                                kVersion + ")");
    }
  }
  LineReader reader(text.substr(text.find('\n') == std::string::npos ? text.size()
                                                                     : text.find('\n') + 1));
  Schema schema;
  {
    auto t = reader.expect("task");
    need(t, 2);
    if (t[1] == "classification") {
      schema.task = Task::kClassification;
    } else if (t[1] == "regression") {
      schema.task = Task::kRegression;
    } else {
      corrupt("unknown task '" + t[1] + "'");
    }
  }
  {
    auto t = reader.expect("target");
    need(t, 2);
    schema.target_name = unescape(t[1]);
  }
  {
    auto t = reader.expect("classes");
    if (t.size() < 2) corrupt("classes line");
    const auto k = parse_int<std::size_t>(t[1]);
    need(t, k + 2);
    for (std::size_t c = 0; c < k; ++c) schema.class_labels.push_back(unescape(t[c + 2]));
  }
  std::size_t p = 0;
  {
    auto t = reader.expect("features");
    need(t, 2);
    p = parse_int<std::size_t>(t[1]);
  }
  for (std::size_t j = 0; j < p; ++j) {
    auto t = reader.expect("feature");
    if (t.size() < 3) corrupt("feature line");
    schema.feature_names.push_back(unescape(t[1]));
    if (t[2] == "numeric") {
      need(t, 3);
      schema.feature_types.push_back(ColumnType::numeric());
    } else if (t[2] == "categorical") {
      if (t.size() < 4) corrupt("feature line");
      const auto levels = parse_int<std::size_t>(t[3]);
      need(t, levels + 4);
      std::vector<std::string> names;
      for (std::size_t l = 0; l < levels; ++l) names.push_back(unescape(t[l + 4]));
      schema.feature_types.push_back(ColumnType::categorical(std::move(names)));
    } else {
      corrupt("unknown feature kind '" + t[2] + "'");
    }
  }
  std::vector<LevelRanks> ranks(p);
  for (std::size_t j = 0; j < p; ++j) {
    if (!schema.feature_types[j].is_categorical()) continue;
    auto t = reader.expect("ordering");
    const std::size_t levels = schema.feature_types[j].levels.size();
    need(t, levels + 2);
    if (parse_int<std::size_t>(t[1]) != j) corrupt("ordering out of sequence");
    for (std::size_t l = 0; l < levels; ++l) ranks[j].push_back(parse_int<int>(t[l + 2]));
  }

  HyperParams params;
  auto scalar = [&](const char* key) {
    auto t = reader.expect(key);
    need(t, 2);
    return t[1];
  };
  params.mtry = parse_int<int>(scalar("mtry"));
  params.sample_fraction = parse_real(scalar("sample_fraction"));
  params.replace = parse_int<int>(scalar("replace")) != 0;
  params.min_node_size = parse_int<int>(scalar("min_node_size"));
  params.num_trees = parse_int<int>(scalar("num_trees"));
  {
    auto t = reader.expect("split_rule");
    need(t, 3);
    auto kind = parse_split_rule(t[1]);
    if (!kind) corrupt("unknown split rule '" + t[1] + "'");
    params.split_rule = SplitRule{*kind, parse_int<int>(t[2])};
  }
  {
    const std::string depth = scalar("max_depth");
    if (depth != "none") params.max_depth = parse_int<int>(depth);
  }
  std::uint64_t seed = 0;
  {
    auto t = reader.expect("seed");
    need(t, 3);
    seed = parse_int<std::uint64_t>(t[1]);
    if (t[2] != kSeedMixing) corrupt("unknown seed mixing '" + t[2] + "'");
  }
  const auto rows = parse_int<std::size_t>(scalar("training_rows"));

  const auto num_trees = static_cast<std::size_t>(params.num_trees);
  std::vector<Tree> trees(num_trees);
  std::vector<std::vector<std::uint32_t>> bags(num_trees);
  for (std::size_t t = 0; t < num_trees; ++t) {
    auto header = reader.expect("tree");
    need(header, 6);
    if (parse_int<std::size_t>(header[1]) != t) corrupt("tree out of sequence");
    const auto nodes = parse_int<std::size_t>(header[2]);
    const auto leaves = parse_int<std::size_t>(header[3]);
    const auto width = parse_int<std::size_t>(header[4]);
    const auto bag_len = parse_int<std::size_t>(header[5]);
    Tree& tree = trees[t];
    tree.value_width = width;
    for (std::size_t i = 0; i < nodes; ++i) {
      auto n = reader.expect("n");
      need(n, 8);
      TreeNode node;
      node.feature = parse_int<std::int32_t>(n[1]);
      node.threshold = parse_real(n[2]);
      node.left = parse_int<std::int32_t>(n[3]);
      node.right = parse_int<std::int32_t>(n[4]);
      node.leaf = parse_int<std::int32_t>(n[5]);
      node.count = parse_int<std::uint32_t>(n[6]);
      node.depth = parse_int<std::uint32_t>(n[7]);
      const auto limit = static_cast<std::int32_t>(nodes);
      if (node.is_leaf()) {
        if (node.leaf < 0 || static_cast<std::size_t>(node.leaf) >= leaves) corrupt("leaf index");
      } else if (static_cast<std::size_t>(node.feature) >= p || node.left <= 0 ||
                 node.right <= 0 || node.left >= limit || node.right >= limit) {
        corrupt("node links out of range");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) corrupt("tree without nodes");
    for (std::size_t l = 0; l < leaves; ++l) {
      auto v = reader.expect("l");
      need(v, width + 1);
      for (std::size_t c = 0; c < width; ++c) tree.leaf_values.push_back(parse_real(v[c + 1]));
    }
    auto b = reader.expect("b");
    need(b, bag_len + 1);
    for (std::size_t i = 0; i < bag_len; ++i) {
      const auto index = parse_int<std::uint32_t>(b[i + 1]);
      if (index >= rows) corrupt("bag index out of range");
      bags[t].push_back(index);
    }
  }
  reader.expect("end");
  if (!reader.at_end()) corrupt("trailing content after 'end'");
  return Forest(std::move(schema), params, seed, rows, std::move(ranks), std::move(trees),
                std::move(bags));
}

void save_model(const Forest& forest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("forest", "cannot write model file '" + path.string() + "'");
  out << serialize_model(forest);
  if (!out) throw Error("forest", "failed writing model file '" + path.string() + "'");
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("forest", "cannot open model file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

FeatureBlock read_rows_csv(const Forest& forest, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("data", "cannot open file '" + path.string() + "'");
  const Schema& schema = forest.schema();
  std::string line;
  if (!std::getline(in, line)) throw Error("data", "empty dataset: file has no header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = internal::split_record(line);
  std::vector<std::size_t> source(schema.p());
  for (std::size_t j = 0; j < schema.p(); ++j) {
    auto it = std::find(header.begin(), header.end(), schema.feature_names[j]);
    if (it == header.end()) {
      throw Error("forest", "schema mismatch: column '" + schema.feature_names[j] +
                                "' missing from '" + path.string() + "'");
    }
    source[j] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::unordered_map<std::string, std::size_t>> level_index(schema.p());
  for (std::size_t j = 0; j < schema.p(); ++j) {
    const auto& levels = schema.feature_types[j].levels;
    for (std::size_t l = 0; l < levels.size(); ++l) level_index[j].emplace(levels[l], l);
  }

  FeatureBlock block;
  block.columns.resize(schema.p());
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = internal::split_record(line);
    if (fields.size() != header.size()) {
      throw Error("data", "ragged row at line " + std::to_string(line_number) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
    }
    ++block.rows;
    for (std::size_t j = 0; j < schema.p(); ++j) {
      const std::string& cell = fields[source[j]];
      if (cell.empty()) {
        throw Error("data", "missing value at row " + std::to_string(block.rows) +
                                ", column " + schema.feature_names[j]);
      }
      double raw = -1.0;
      if (schema.feature_types[j].is_categorical()) {
        if (auto it = level_index[j].find(cell); it != level_index[j].end()) {
          raw = static_cast<double>(it->second);
        }
      } else {
        auto value = internal::parse_number(cell);
        if (!value) {
          throw Error("data", "value '" + cell + "' in numeric column '" +
                                  schema.feature_names[j] + "' is not a number");
        }
        raw = *value;
      }
      block.columns[j].push_back(forest.transform(j, raw));
    }
  }
  return block;
}

}  // namespace foresttune
