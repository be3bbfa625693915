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

#include <doctest.h>

#include <sstream>

#include "causalemo/corpus.hpp"
#include "causalemo/textprep.hpp"
#include "support.hpp"

using namespace causalemo;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

Dialogue dialogue_of(std::initializer_list<std::pair<const char*, const char*>> turns) {
  Dialogue dialogue;
  for (const auto& [speaker, text] : turns) {
    Utterance u;
    u.speaker = speaker;
    u.text = text;
    u.emotion = EmotionLabel::neutral;
    dialogue.utterances.push_back(u);
  }
  return dialogue;
}

}  // namespace

TEST_CASE("first utterance gets the sentinel context") {
  const auto pairs = build_causal_pairs(dialogue_of({{"Joey", "What?!"}}));
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].target_text == "What?!");
  CHECK(pairs[0].context_text == "[None]");
  CHECK_FALSE(pairs[0].has_context());
  CHECK_FALSE(pairs[0].context_speaker.has_value());
}

TEST_CASE("contexts are the preceding utterances") {
  const auto pairs = build_causal_pairs(dialogue_of({{"a", "u1"}, {"b", "u2"}, {"a", "u3"}}));
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].context_text == "[None]");
  CHECK(pairs[1].context_text == "u1");
  CHECK(pairs[2].context_text == "u2");
  CHECK(pairs[2].context_speaker == "b");
  CHECK(pairs[2].label == EmotionLabel::neutral);
}

TEST_CASE("one pair per utterance and one sentinel per dialogue") {
  const auto set = testing::keyword_corpus(20, 11);
  for (const auto& dialogue : set) {
    const auto pairs = build_causal_pairs(dialogue);
    CHECK(pairs.size() == dialogue.utterances.size());
    std::size_t sentinels = 0;
    for (const auto& p : pairs) sentinels += p.has_context() ? 0 : 1;
    CHECK(sentinels == 1);
  }
}

TEST_CASE("render pair surface form") {
  CausalPair pair;
  pair.target_text = "What's wrong with you?";
  pair.context_text = "What?!";
  CHECK(render_pair(pair) == "[CLS] What's wrong with you? [SEP] What?! [SEP]");
  pair.target_text = "a";
  pair.context_text = "[None]";
  CHECK(render_pair(pair) == "[CLS] a [SEP] [None] [SEP]");
}

TEST_CASE("sentence representation table rows") {
  const auto set = load_dialogues(testing::data_path("table_dialogues.json"), DatasetSource::friends);
  const auto expected = lines_of(testing::read_text(testing::data_path("sentence_representation.txt")));
  const auto pairs = build_causal_pairs(set[0]);
  REQUIRE(pairs.size() == expected.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(render_pair(pairs[i]) == expected[i]);
}

TEST_CASE("personality tokenization table rows") {
  const auto set = load_dialogues(testing::data_path("table_dialogues.json"), DatasetSource::friends);
  const auto expected = lines_of(testing::read_text(testing::data_path("personality_tokenization.txt")));
  PrepOptions options;
  options.personality_tokens = true;
  const auto pairs = prepare_pairs(DialogueSet({set[1]}), options);
  REQUIRE(pairs.size() == expected.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(render_pair(pairs[i]) == expected[i]);
}

TEST_CASE("personality tokens on target and context sides") {
  const auto policy = SpeakerTokenPolicy::friends_main_cast();
  CausalPair pair;
  pair.target_text = "Ohhh. Don't go.";
  pair.target_speaker = "Chandler";
  pair.context_text = "I'm sorry.";
  pair.context_speaker = "Janice";
  const auto tokenized = apply_personality_tokens(pair, policy);
  CHECK(tokenized.target_text == "[Chandler] [says] Ohhh. Don't go.");
  CHECK(tokenized.context_text == "I'm sorry.");
  CHECK(apply_personality_tokens(tokenized, policy) == tokenized);

  CausalPair reply;
  reply.target_text = "No, I gotta go.";
  reply.target_speaker = "Janice";
  reply.context_text = "Ohhh. Don't go.";
  reply.context_speaker = "Chandler";
  CHECK(apply_personality_tokens(reply, policy).context_text == "[Chandler] [says] Ohhh. Don't go.");

  SpeakerTokenPolicy nobody;
  CHECK(apply_personality_tokens(pair, nobody) == pair);
}

TEST_CASE("sentinel context never gets a speaker prefix") {
  CausalPair pair;
  pair.target_text = "hi";
  pair.target_speaker = "Ross";
  pair.context_text = "[None]";
  const auto out = apply_personality_tokens(pair, SpeakerTokenPolicy::friends_main_cast());
  CHECK(out.target_text == "[Ross] [says] hi");
  CHECK(out.context_text == "[None]");
}

TEST_CASE("main cast tokens") {
  const auto policy = SpeakerTokenPolicy::friends_main_cast();
  CHECK(policy.main_speakers.size() == 6);
  CHECK(policy.token_for("Phoebe") == "[Phoebe]");
  CHECK(policy.token_for("Janice") == std::nullopt);
  CHECK(policy.tokens().front() == "[says]");
}

TEST_CASE("chat normalization rules") {
  CHECK(normalize_chat_text("person_01 see you :D") == "[PERSON] see you :D");
  CHECK(normalize_chat_text("") == "[EMPTY]");
  CHECK(normalize_chat_text("   ") == "[EMPTY]");
  CHECK(normalize_chat_text("check https://a.b/c organization_80 at time_12") ==
        "check [URL] [ORG] at [TIME]");
  CHECK(normalize_chat_text("see www.example.com now") == "see [URL] now");
  CHECK(normalize_chat_text("xperson_01 and person_ab") == "xperson_01 and person_ab");
  CHECK(normalize_chat_text("lol T_T ^^") == "lol T_T ^^");
}

TEST_CASE("chat normalization is idempotent") {
  for (const char* text : {"person_01 see you :D", "", "http://x.y organization_3", "plain text"}) {
    const auto once = normalize_chat_text(text);
    CHECK(normalize_chat_text(once) == once);
  }
}

TEST_CASE("prepare pairs normalizes before pairing") {
  const auto set = parse_dialogues(R"([[
    {"speaker": "person_01", "utterance": "hey person_02", "emotion": "neutral"},
    {"speaker": "person_02", "utterance": "", "emotion": "joy"}
  ]])", DatasetSource::emotionpush);
  const auto pairs = prepare_pairs(set, PrepOptions::for_source(DatasetSource::emotionpush));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].target_text == "hey [PERSON]");
  CHECK(pairs[1].target_text == "[EMPTY]");
  CHECK(pairs[1].context_text == "hey [PERSON]");
}

TEST_CASE("pairs file round trip") {
  const auto set = load_dialogues(testing::data_path("table_dialogues.json"), DatasetSource::friends);
  const auto pairs = prepare_pairs(set, PrepOptions::for_source(DatasetSource::friends));
  std::stringstream buffer;
  write_pairs(buffer, pairs);
  CHECK(read_pairs(buffer) == pairs);
}
