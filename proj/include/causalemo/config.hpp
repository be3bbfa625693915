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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalemo/emotion.hpp"
#include "causalemo/encoder.hpp"
#include "causalemo/textprep.hpp"
#include "causalemo/train.hpp"

namespace causalemo {

/// Everything one CLI invocation needs. Built from a dataset preset, then
/// a flat "section.key = value" config file, then command-line overrides.
struct RunConfig {
  DatasetSource dataset = DatasetSource::friends;

  std::string train_file;
  std::string pretrain_corpus;
  std::string tweet_file;
  std::string checkpoint_dir = ".";
  std::string vocab_file;

  ModelConfig model;
  TrainConfig train;
  std::size_t n_train = 800;

  TrainConfig pretrain;
  double mask_rate = 0.15;
  std::size_t pretrain_examples = 0;

  bool personality_tokens = true;
  bool chat_normalization = false;
  bool lowercase = true;

  std::size_t vocab_min_freq = 2;
  std::size_t vocab_size_cap = 8000;

  /// "drop" (default) or "keep": how model.dropout_head is read.
  std::string dropout_semantics = "drop";
  double dropout_value = 0.75;

  /// Friends: max_len 113, batch 8, 3 epochs, uncased, personality tokens.
  /// EmotionPush: max_len 249, batch 4, 2 epochs, cased, chat normalization.
  /// Both: Adam learning rate 2.5e-6, head dropout 0.75.
  static RunConfig preset(DatasetSource dataset);

  /// Sets one dotted key. Throws ConfigError on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Folds derived fields (dropout semantics) into `model`. Call after all
  /// set() calls.
  void finalize();

  PrepOptions prep_options() const;
};

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError
/// with the line number on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view text);

}  // namespace causalemo
