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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalemo/causal_pair.hpp"
#include "causalemo/corpus.hpp"

namespace causalemo {

/// Speakers whose utterances get a "[Name] [says] " prefix.
struct SpeakerTokenPolicy {
  std::vector<std::string> main_speakers;
  std::string says_token = "[says]";

  /// Rachel, Monica, Phoebe, Joey, Chandler, Ross.
  static SpeakerTokenPolicy friends_main_cast();

  /// "[Name]" for a main speaker (case-insensitive exact match), else empty.
  std::optional<std::string> token_for(std::string_view speaker) const;

  /// Every bracketed token this policy can emit, says-token first.
  std::vector<std::string> tokens() const;
};

/// One pair per utterance; the first pair's context is kNoneToken.
std::vector<CausalPair> build_causal_pairs(const Dialogue& dialogue);

/// Prefixes main-speaker sides with "[Name] [says] ". Idempotent.
CausalPair apply_personality_tokens(CausalPair pair, const SpeakerTokenPolicy& policy);

/// Unifies hyperlinks to [URL], blank text to [EMPTY], and anonymized
/// entities (person_NN, organization_NN, time_NN) to [PERSON]/[ORG]/[TIME].
/// Everything else is preserved byte for byte.
std::string normalize_chat_text(std::string_view text);

/// "[CLS] {target} [SEP] {context} [SEP]".
std::string render_pair(const CausalPair& pair);

struct PrepOptions {
  bool personality_tokens = false;
  bool chat_normalization = false;
  SpeakerTokenPolicy policy = SpeakerTokenPolicy::friends_main_cast();

  /// Personality tokens for Friends, chat normalization for EmotionPush.
  static PrepOptions for_source(DatasetSource source);
};

/// Normalizes utterances (if enabled), builds causal pairs for every
/// dialogue, then applies personality tokens (if enabled).
std::vector<CausalPair> prepare_pairs(const DialogueSet& set, const PrepOptions& options);

/// Pairs file: one JSON object per line with keys target, context, label,
/// source. Speakers are carried as target_speaker/context_speaker.
void write_pairs(std::ostream& out, const std::vector<CausalPair>& pairs);
std::vector<CausalPair> read_pairs(std::istream& in);

}  // namespace causalemo
