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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causalemo/causal_pair.hpp"
#include "causalemo/emotion.hpp"

namespace causalemo {

struct Utterance {
  std::string speaker;
  std::string text;
  std::optional<EmotionLabel> emotion;  // set whenever labels are required
  std::size_t dialogue_index = 0;
};

struct Dialogue {
  std::vector<Utterance> utterances;
  DatasetSource source = DatasetSource::friends;
};

/// Dialogues in input-file order. Immutable once built.
class DialogueSet {
 public:
  DialogueSet() = default;
  explicit DialogueSet(std::vector<Dialogue> dialogues);

  const std::vector<Dialogue>& dialogues() const { return dialogues_; }
  std::size_t size() const { return dialogues_.size(); }
  bool empty() const { return dialogues_.empty(); }
  std::size_t utterance_count() const;

  const Dialogue& operator[](std::size_t i) const { return dialogues_[i]; }
  auto begin() const { return dialogues_.begin(); }
  auto end() const { return dialogues_.end(); }

 private:
  std::vector<Dialogue> dialogues_;
};

enum class LabelRequirement { required, optional };

/// Parses the EmotionLines layout: an array of dialogues, each an array of
/// {"speaker", "utterance", "emotion"} objects. Extra keys are ignored.
/// Throws ParseError (with byte offset) on malformed JSON and
/// ValidationError on structural problems or unknown emotion strings.
DialogueSet parse_dialogues(std::string_view raw, DatasetSource source,
                            LabelRequirement labels = LabelRequirement::required);

DialogueSet load_dialogues(const std::filesystem::path& path, DatasetSource source,
                           LabelRequirement labels = LabelRequirement::required);

/// Inverse of parse_dialogues for the fields it keeps.
std::string serialize_dialogues(const DialogueSet& set);

/// First `n_train` dialogues, then the rest. Throws RangeError when
/// n_train exceeds the set size.
std::pair<DialogueSet, DialogueSet> split_train_val(const DialogueSet& set,
                                                    std::size_t n_train);

using LabelSet = std::set<EmotionLabel>;

LabelSet evaluation_label_set();

/// Keeps pairs whose target label is in `keep`. Context text is untouched.
std::vector<CausalPair> filter_labels(std::span<const CausalPair> pairs,
                                      const LabelSet& keep);

using LabelDistribution = std::map<EmotionLabel, std::size_t>;

/// Counts target labels; every one of the eight labels has an entry.
LabelDistribution label_distribution(std::span<const CausalPair> pairs);

}  // namespace causalemo
