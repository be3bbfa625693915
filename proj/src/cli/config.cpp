// Copyright 2026 The causalemo Authors.
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

#include "causalemo/config.hpp"

#include <charconv>
#include <functional>
#include <map>

#include "causalemo/errors.hpp"

namespace causalemo {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::size_t to_count(std::string_view key, std::string_view value) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got \"" +
                      std::string(value) + "\"");
  }
  return out;
}

double to_real(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string text(value);
    const double out = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": expected a number, got \"" + std::string(value) +
                      "\"");
  }
}

bool to_flag(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(std::string(key) + ": expected true/false, got \"" + std::string(value) + "\"");
}

}  // namespace

RunConfig RunConfig::preset(DatasetSource dataset) {
  RunConfig c;
  c.dataset = dataset;
  c.train.learning_rate = 2.5e-6;
  c.train.warm_first_epoch = true;
  c.dropout_value = 0.75;
  c.pretrain.learning_rate = 1e-4;
  c.pretrain.batch_size = 16;
  c.pretrain.n_epochs = 3;
  c.pretrain.warm_first_epoch = false;
  if (dataset == DatasetSource::friends) {
    c.model.max_len = 113;
    c.train.batch_size = 8;
    c.train.n_epochs = 3;
    c.lowercase = true;
    c.personality_tokens = true;
    c.chat_normalization = false;
  } else {
    c.model.max_len = 249;
    c.train.batch_size = 4;
    c.train.n_epochs = 2;
    c.lowercase = false;
    c.personality_tokens = false;
    c.chat_normalization = true;
  }
  c.finalize();
  return c;
}

void RunConfig::set(std::string_view key_view, std::string_view raw) {
  const std::string key(key_view);
  const std::string value = trim(raw);
  using Setter = std::function<void(RunConfig&, const std::string&)>;
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"dataset",
       [](RunConfig& c, const std::string& v) {
         auto source = parse_source(v);
         if (!source) throw ConfigError("dataset: expected friends or emotionpush");
         c.dataset = *source;
       }},
      {"paths.train", [](RunConfig& c, const std::string& v) { c.train_file = v; }},
      {"paths.pretrain_corpus", [](RunConfig& c, const std::string& v) { c.pretrain_corpus = v; }},
      {"paths.tweets", [](RunConfig& c, const std::string& v) { c.tweet_file = v; }},
      {"paths.checkpoint_dir", [](RunConfig& c, const std::string& v) { c.checkpoint_dir = v; }},
      {"paths.vocab", [](RunConfig& c, const std::string& v) { c.vocab_file = v; }},
      {"model.d_model", [](RunConfig& c, const std::string& v) { c.model.d_model = to_count("model.d_model", v); }},
      {"model.n_heads", [](RunConfig& c, const std::string& v) { c.model.n_heads = to_count("model.n_heads", v); }},
      {"model.n_layers", [](RunConfig& c, const std::string& v) { c.model.n_layers = to_count("model.n_layers", v); }},
      {"model.d_ff", [](RunConfig& c, const std::string& v) { c.model.d_ff = to_count("model.d_ff", v); }},
      {"model.max_len", [](RunConfig& c, const std::string& v) { c.model.max_len = to_count("model.max_len", v); }},
      {"model.init_std", [](RunConfig& c, const std::string& v) { c.model.init_std = to_real("model.init_std", v); }},
      {"model.dropout_head", [](RunConfig& c, const std::string& v) { c.dropout_value = to_real("model.dropout_head", v); }},
      {"model.dropout_semantics",
       [](RunConfig& c, const std::string& v) {
         if (v != "drop" && v != "keep") throw ConfigError("model.dropout_semantics: expected drop or keep");
         c.dropout_semantics = v;
       }},
      {"train.batch_size", [](RunConfig& c, const std::string& v) { c.train.batch_size = to_count("train.batch_size", v); }},
      {"train.learning_rate", [](RunConfig& c, const std::string& v) { c.train.learning_rate = to_real("train.learning_rate", v); }},
      {"train.epochs", [](RunConfig& c, const std::string& v) { c.train.n_epochs = to_count("train.epochs", v); }},
      {"train.seed", [](RunConfig& c, const std::string& v) { c.train.seed = to_count("train.seed", v); c.pretrain.seed = c.train.seed; }},
      {"train.warm_first_epoch", [](RunConfig& c, const std::string& v) { c.train.warm_first_epoch = to_flag("train.warm_first_epoch", v); }},
      {"train.n_train", [](RunConfig& c, const std::string& v) { c.n_train = to_count("train.n_train", v); }},
      {"train.adam_beta1", [](RunConfig& c, const std::string& v) { c.train.beta1 = c.pretrain.beta1 = to_real("train.adam_beta1", v); }},
      {"train.adam_beta2", [](RunConfig& c, const std::string& v) { c.train.beta2 = c.pretrain.beta2 = to_real("train.adam_beta2", v); }},
      {"train.adam_epsilon", [](RunConfig& c, const std::string& v) { c.train.epsilon = c.pretrain.epsilon = to_real("train.adam_epsilon", v); }},
      {"pretrain.learning_rate", [](RunConfig& c, const std::string& v) { c.pretrain.learning_rate = to_real("pretrain.learning_rate", v); }},
      {"pretrain.epochs", [](RunConfig& c, const std::string& v) { c.pretrain.n_epochs = to_count("pretrain.epochs", v); }},
      {"pretrain.batch_size", [](RunConfig& c, const std::string& v) { c.pretrain.batch_size = to_count("pretrain.batch_size", v); }},
      {"pretrain.mask_rate", [](RunConfig& c, const std::string& v) { c.mask_rate = to_real("pretrain.mask_rate", v); }},
      {"pretrain.examples", [](RunConfig& c, const std::string& v) { c.pretrain_examples = to_count("pretrain.examples", v); }},
      {"prep.personality_tokens", [](RunConfig& c, const std::string& v) { c.personality_tokens = to_flag("prep.personality_tokens", v); }},
      {"prep.chat_normalization", [](RunConfig& c, const std::string& v) { c.chat_normalization = to_flag("prep.chat_normalization", v); }},
      {"prep.lowercase", [](RunConfig& c, const std::string& v) { c.lowercase = to_flag("prep.lowercase", v); }},
      {"vocab.min_freq", [](RunConfig& c, const std::string& v) { c.vocab_min_freq = to_count("vocab.min_freq", v); }},
      {"vocab.size_cap", [](RunConfig& c, const std::string& v) { c.vocab_size_cap = to_count("vocab.size_cap", v); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key \"" + key + "\"");
  it->second(*this, value);
}

void RunConfig::finalize() {
  model.dropout_head = dropout_semantics == "keep" ? 1.0 - dropout_value : dropout_value;
  if (!(mask_rate >= 0.0 && mask_rate <= 1.0)) throw ConfigError("pretrain.mask_rate must lie in [0, 1]");
  train.validate();
  pretrain.validate();
}

PrepOptions RunConfig::prep_options() const {
  PrepOptions options;
  options.personality_tokens = personality_tokens;
  options.chat_normalization = chat_normalization;
  return options;
}

std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(std::string_view(content).substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), trim(std::string_view(content).substr(eq + 1)));
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace causalemo
