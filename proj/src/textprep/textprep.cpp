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

#include "causalemo/textprep.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "causalemo/errors.hpp"

namespace causalemo {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

bool istarts_with(std::string_view text, std::string_view prefix) {
  return text.size() >= prefix.size() && iequals(text.substr(0, prefix.size()), prefix);
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string prefix_for(const std::string& token, const SpeakerTokenPolicy& policy) {
  return token + " " + policy.says_token + " ";
}

void add_prefix(std::string& text, const std::string& prefix) {
  if (!text.starts_with(prefix)) text.insert(0, prefix);
}

struct EntityRule {
  std::string_view stem;
  std::string_view tag;
};

constexpr std::array<EntityRule, 3> kEntityRules = {{
    {"person_", "[PERSON]"},
    {"organization_", "[ORG]"},
    {"time_", "[TIME]"},
}};

// Length of an entity placeholder (stem + digits) starting at `pos`, or 0.
std::size_t match_entity(std::string_view text, std::size_t pos, std::string_view& tag) {
  if (pos > 0 && is_word_char(text[pos - 1])) return 0;
  for (const auto& rule : kEntityRules) {
    if (text.substr(pos).starts_with(rule.stem)) {
      std::size_t end = pos + rule.stem.size();
      const std::size_t digits_start = end;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      if (end == digits_start) continue;
      if (end < text.size() && is_word_char(text[end])) continue;
      tag = rule.tag;
      return end - pos;
    }
  }
  return 0;
}

}  // namespace

SpeakerTokenPolicy SpeakerTokenPolicy::friends_main_cast() {
  SpeakerTokenPolicy policy;
  policy.main_speakers = {"Rachel", "Monica", "Phoebe", "Joey", "Chandler", "Ross"};
  return policy;
}

std::optional<std::string> SpeakerTokenPolicy::token_for(std::string_view speaker) const {
  for (const auto& name : main_speakers) {
    if (iequals(name, speaker)) return "[" + name + "]";
  }
  return std::nullopt;
}

std::vector<std::string> SpeakerTokenPolicy::tokens() const {
  std::vector<std::string> out;
  if (!main_speakers.empty()) out.push_back(says_token);
  for (const auto& name : main_speakers) out.push_back("[" + name + "]");
  return out;
}

std::vector<CausalPair> build_causal_pairs(const Dialogue& dialogue) {
  std::vector<CausalPair> pairs;
  pairs.reserve(dialogue.utterances.size());
  for (std::size_t t = 0; t < dialogue.utterances.size(); ++t) {
    const Utterance& current = dialogue.utterances[t];
    CausalPair pair;
    pair.target_text = current.text;
    pair.target_speaker = current.speaker;
    pair.label = current.emotion;
    pair.source = dialogue.source;
    if (t == 0) {
      pair.context_text = std::string(kNoneToken);
    } else {
      const Utterance& previous = dialogue.utterances[t - 1];
      pair.context_text = previous.text;
      pair.context_speaker = previous.speaker;
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

CausalPair apply_personality_tokens(CausalPair pair, const SpeakerTokenPolicy& policy) {
  if (auto token = policy.token_for(pair.target_speaker)) {
    add_prefix(pair.target_text, prefix_for(*token, policy));
  }
  if (pair.context_speaker) {
    if (auto token = policy.token_for(*pair.context_speaker)) {
      add_prefix(pair.context_text, prefix_for(*token, policy));
    }
  }
  return pair;
}

std::string normalize_chat_text(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), is_space)) return "[EMPTY]";

  std::string linked;
  linked.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      linked.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && !is_space(text[end])) ++end;
    const std::string_view run = text.substr(i, end - i);
    if (istarts_with(run, "http://") || istarts_with(run, "https://") ||
        istarts_with(run, "www.")) {
      linked += "[URL]";
    } else {
      linked += run;
    }
    i = end;
  }

  std::string out;
  out.reserve(linked.size());
  const std::string_view view = linked;
  for (std::size_t pos = 0; pos < view.size();) {
    std::string_view tag;
    if (const std::size_t n = match_entity(view, pos, tag)) {
      out += tag;
      pos += n;
    } else {
      out.push_back(view[pos++]);
    }
  }
  return out;
}

std::string render_pair(const CausalPair& pair) {
  std::string out = "[CLS] ";
  out += pair.target_text;
  out += " [SEP] ";
  out += pair.context_text;
  out += " [SEP]";
  return out;
}

PrepOptions PrepOptions::for_source(DatasetSource source) {
  PrepOptions options;
  options.personality_tokens = source == DatasetSource::friends;
  options.chat_normalization = source == DatasetSource::emotionpush;
  return options;
}

std::vector<CausalPair> prepare_pairs(const DialogueSet& set, const PrepOptions& options) {
  std::vector<CausalPair> out;
  out.reserve(set.utterance_count());
  for (const Dialogue& dialogue : set) {
    std::vector<CausalPair> pairs;
    if (options.chat_normalization) {
      Dialogue normalized = dialogue;
      for (auto& utt : normalized.utterances) utt.text = normalize_chat_text(utt.text);
      pairs = build_causal_pairs(normalized);
    } else {
      pairs = build_causal_pairs(dialogue);
    }
    for (auto& pair : pairs) {
      out.push_back(options.personality_tokens
                        ? apply_personality_tokens(std::move(pair), options.policy)
                        : std::move(pair));
    }
  }
  return out;
}

void write_pairs(std::ostream& out, const std::vector<CausalPair>& pairs) {
  for (const auto& pair : pairs) {
    nlohmann::json record = {
        {"target", pair.target_text},
        {"context", pair.context_text},
        {"label", pair.label ? nlohmann::json(std::string(to_string(*pair.label))) : nullptr},
        {"source", std::string(to_string(pair.source))},
        {"target_speaker", pair.target_speaker},
        {"context_speaker", pair.context_speaker ? nlohmann::json(*pair.context_speaker) : nullptr},
    };
    out << record.dump() << '\n';
  }
}

std::vector<CausalPair> read_pairs(std::istream& in) {
  std::vector<CausalPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("pairs file line " + std::to_string(line_no) + ": " + e.what(),
                       line_offset + e.byte);
    }
    CausalPair pair;
    try {
      pair.target_text = record.at("target").get<std::string>();
      pair.context_text = record.at("context").get<std::string>();
      if (record.contains("target_speaker")) {
        pair.target_speaker = record["target_speaker"].get<std::string>();
      }
      if (record.contains("context_speaker") && record["context_speaker"].is_string()) {
        pair.context_speaker = record["context_speaker"].get<std::string>();
      }
      const auto source = parse_source(record.at("source").get<std::string>());
      if (!source) throw ValidationError("unknown source");
      pair.source = *source;
      const auto& label = record.at("label");
      if (label.is_string()) {
        pair.label = parse_emotion(label.get<std::string>());
        if (!pair.label) throw ValidationError("unknown emotion " + label.get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("pairs file line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("pairs file line " + std::to_string(line_no) + ": " + e.what());
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace causalemo
