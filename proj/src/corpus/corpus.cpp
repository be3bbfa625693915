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

#include "causalemo/corpus.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "causalemo/errors.hpp"

namespace causalemo {

using nlohmann::json;

DialogueSet::DialogueSet(std::vector<Dialogue> dialogues) : dialogues_(std::move(dialogues)) {}

std::size_t DialogueSet::utterance_count() const {
  std::size_t n = 0;
  for (const auto& d : dialogues_) n += d.utterances.size();
  return n;
}

namespace {

const std::string& string_field(const json& object, const char* key, std::size_t dialogue,
                                std::size_t utterance) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string()) {
    throw ValidationError("dialogue " + std::to_string(dialogue) + ", utterance " +
                          std::to_string(utterance) + ": missing string field \"" + key + "\"");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

DialogueSet parse_dialogues(std::string_view raw, DatasetSource source, LabelRequirement labels) {
  json root;
  try {
    root = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed dialogue JSON: ") + e.what(), e.byte);
  }
  if (!root.is_array()) {
    throw ValidationError("dialogue file must be a JSON array of dialogues");
  }

  std::vector<Dialogue> dialogues;
  dialogues.reserve(root.size());
  for (std::size_t d = 0; d < root.size(); ++d) {
    const json& turns = root[d];
    if (!turns.is_array()) {
      throw ValidationError("dialogue " + std::to_string(d) + " is not an array of utterances");
    }
    if (turns.empty()) {
      throw ValidationError("dialogue " + std::to_string(d) + " is empty");
    }
    Dialogue dialogue;
    dialogue.source = source;
    dialogue.utterances.reserve(turns.size());
    for (std::size_t u = 0; u < turns.size(); ++u) {
      const json& turn = turns[u];
      if (!turn.is_object()) {
        throw ValidationError("dialogue " + std::to_string(d) + ", utterance " +
                              std::to_string(u) + " is not an object");
      }
      Utterance utt;
      utt.speaker = string_field(turn, "speaker", d, u);
      utt.text = string_field(turn, "utterance", d, u);
      utt.dialogue_index = d;
      auto emotion = turn.find("emotion");
      const bool has_emotion = emotion != turn.end() && emotion->is_string();
      if (has_emotion) {
        const auto& name = emotion->get_ref<const std::string&>();
        utt.emotion = parse_emotion(name);
        if (!utt.emotion) {
          throw ValidationError("unknown emotion \"" + name + "\" in dialogue " +
                                std::to_string(d));
        }
      } else if (labels == LabelRequirement::required) {
        string_field(turn, "emotion", d, u);  // throws
      }
      dialogue.utterances.push_back(std::move(utt));
    }
    dialogues.push_back(std::move(dialogue));
  }
  return DialogueSet(std::move(dialogues));
}

DialogueSet load_dialogues(const std::filesystem::path& path, DatasetSource source,
                           LabelRequirement labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dialogue file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dialogues(buffer.str(), source, labels);
}

std::string serialize_dialogues(const DialogueSet& set) {
  json root = json::array();
  for (const auto& dialogue : set) {
    json turns = json::array();
    for (const auto& utt : dialogue.utterances) {
      json turn = {{"speaker", utt.speaker}, {"utterance", utt.text}};
      if (utt.emotion) turn["emotion"] = std::string(to_string(*utt.emotion));
      turns.push_back(std::move(turn));
    }
    root.push_back(std::move(turns));
  }
  return root.dump(2);
}

std::pair<DialogueSet, DialogueSet> split_train_val(const DialogueSet& set, std::size_t n_train) {
  if (n_train > set.size()) {
    throw RangeError("n_train " + std::to_string(n_train) + " exceeds " +
                     std::to_string(set.size()) + " dialogues");
  }
  const auto& all = set.dialogues();
  std::vector<Dialogue> train(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<Dialogue> val(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
  return {DialogueSet(std::move(train)), DialogueSet(std::move(val))};
}

LabelSet evaluation_label_set() {
  return LabelSet(kEvaluationLabels.begin(), kEvaluationLabels.end());
}

std::vector<CausalPair> filter_labels(std::span<const CausalPair> pairs, const LabelSet& keep) {
  if (keep.empty()) throw PreconditionError("filter_labels: keep set is empty");
  std::vector<CausalPair> out;
  for (const auto& pair : pairs) {
    if (pair.label && keep.contains(*pair.label)) out.push_back(pair);
  }
  return out;
}

LabelDistribution label_distribution(std::span<const CausalPair> pairs) {
  LabelDistribution counts;
  for (EmotionLabel label : kAllEmotions) counts[label] = 0;
  for (const auto& pair : pairs) {
    if (pair.label) ++counts[*pair.label];
  }
  return counts;
}

}  // namespace causalemo
