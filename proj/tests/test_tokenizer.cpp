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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "causalemo/errors.hpp"
#include "causalemo/tokenizer.hpp"
#include "support.hpp"

using namespace causalemo;

namespace {

Vocab small_vocab(std::vector<std::string> extra) {
  auto tokens = reserved_tokens(SpeakerTokenPolicy::friends_main_cast());
  tokens.insert(tokens.end(), extra.begin(), extra.end());
  return Vocab::from_tokens(tokens);
}

std::vector<std::string> strings(std::initializer_list<const char*> items) {
  return {items.begin(), items.end()};
}

}  // namespace

TEST_CASE("reserved token order") {
  const auto tokens = reserved_tokens(SpeakerTokenPolicy::friends_main_cast());
  REQUIRE(tokens.size() == 18);
  CHECK(tokens[0] == "[PAD]");
  CHECK(tokens[4] == "[MASK]");
  CHECK(tokens[5] == "[None]");
  CHECK(tokens[11] == "[says]");
  CHECK(tokens[17] == "[Ross]");
}

TEST_CASE("build vocab counts words") {
  const std::vector<std::string> corpus = {"aa aa", "aa b"};
  const auto vocab = build_vocab(corpus, 1, 1000);
  CHECK(vocab.contains("aa"));
  CHECK(vocab.contains("b"));
  CHECK(vocab.reserved_count() == 18);
  // "aa" (3 occurrences) outranks "b" (1).
  CHECK(*vocab.find("aa") < *vocab.find("b"));
  CHECK(*vocab.find("[PAD]") == 0);
}

TEST_CASE("empty corpus gives only reserved tokens") {
  const std::vector<std::string> corpus = {"", "   "};
  const auto vocab = build_vocab(corpus, 1, 1000);
  CHECK(vocab.size() == 18);
}

TEST_CASE("min_freq drops rare words") {
  const std::vector<std::string> corpus = {"rare common common", "rare common"};
  const auto vocab = build_vocab(corpus, 3, 1000);
  CHECK_FALSE(vocab.contains("rare"));
  CHECK(vocab.contains("common"));
  const auto pieces = wordpiece_tokenize("rare", vocab);
  REQUIRE_FALSE(pieces.empty());
  for (const auto& p : pieces) CHECK(p != "rare");
}

TEST_CASE("size cap and reserved floor") {
  const std::vector<std::string> corpus = {"a b c d e f g h i j"};
  CHECK(build_vocab(corpus, 1, 20).size() == 20);
  CHECK_THROWS_AS(build_vocab(corpus, 1, 10), ConfigError);
}

TEST_CASE("vocab building is deterministic") {
  const std::vector<std::string> corpus = {"the cat sat", "on the mat", "a cat"};
  CHECK(build_vocab(corpus, 1, 100).tokens() == build_vocab(corpus, 1, 100).tokens());
}

TEST_CASE("vocab file round trip and checksum") {
  const std::vector<std::string> corpus = {"hello there", "general kenobi"};
  const auto vocab = build_vocab(corpus, 1, 100);
  std::stringstream buffer;
  vocab.save(buffer);
  const auto loaded = Vocab::load(buffer);
  CHECK(loaded.tokens() == vocab.tokens());
  CHECK(loaded.checksum() == vocab.checksum());
  CHECK(loaded.reserved_count() == vocab.reserved_count());
  CHECK(small_vocab({"x"}).checksum() != small_vocab({"y"}).checksum());
}

TEST_CASE("vocab rejects duplicates and misplaced specials") {
  CHECK_THROWS_AS(Vocab::from_tokens(strings({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "a", "a"})),
                  ValidationError);
  CHECK_THROWS_AS(Vocab::from_tokens(strings({"[UNK]", "[PAD]", "[CLS]", "[SEP]", "[MASK]"})),
                  ValidationError);
}

TEST_CASE("reserved tokens stay atomic") {
  const auto vocab = small_vocab({"hi"});
  CHECK(wordpiece_tokenize("[Chandler] [says] hi", vocab) == strings({"[Chandler]", "[says]", "hi"}));
  CHECK(wordpiece_tokenize("[Chandler] [says] HI", vocab, true) ==
        strings({"[Chandler]", "[says]", "hi"}));
}

TEST_CASE("greedy longest match") {
  const auto vocab = small_vocab({"play", "##ing", "##in", "##g", "p"});
  CHECK(wordpiece_tokenize("playing", vocab) == strings({"play", "##ing"}));
  CHECK(wordpiece_tokenize("zzz", vocab) == strings({"[UNK]"}));
}

TEST_CASE("punctuation splits words") {
  const auto vocab = small_vocab({"what", "?", "!", "'", "s"});
  CHECK(pre_tokenize("What?!", vocab, true) == strings({"what", "?", "!"}));
  CHECK(wordpiece_tokenize("What's", vocab, true) == strings({"what", "'", "s"}));
}

TEST_CASE("multibyte characters are not split") {
  const auto vocab = small_vocab({"caf", "##é", "é"});
  CHECK(wordpiece_tokenize("café", vocab) == strings({"caf", "##é"}));
  CHECK(wordpiece_tokenize("caféx", vocab) == strings({"[UNK]"}));
}

TEST_CASE("very long words become unknown") {
  const auto vocab = small_vocab({"a", "##a"});
  CHECK(wordpiece_tokenize(std::string(101, 'a'), vocab) == strings({"[UNK]"}));
  CHECK(wordpiece_tokenize(std::string(100, 'a'), vocab).size() == 100);
}

TEST_CASE("minimal encoding layout") {
  const auto vocab = small_vocab({"a"});
  CausalPair pair;
  pair.target_text = "a";
  pair.context_text = "[None]";
  const auto enc = encode_pair(pair, vocab, 8, false);
  const int a = *vocab.find("a");
  const int none = *vocab.find("[None]");
  CHECK(enc.ids == std::vector<int>{2, a, 3, none, 3, 0, 0, 0});
  CHECK(enc.segments == std::vector<int>{0, 0, 0, 1, 1, 0, 0, 0});
  CHECK(enc.attention_mask == std::vector<int>{1, 1, 1, 1, 1, 0, 0, 0});
  CHECK(enc.real_length() == 5);
}

TEST_CASE("context is truncated before the target") {
  const auto vocab = small_vocab({"a", "b"});
  const std::vector<std::string> a(3, "a");
  const std::vector<std::string> b(10, "b");
  const auto enc = encode_tokens(a, b, vocab, 10);
  // Capacity for B is max_len - len(A) - 3.
  const std::size_t expected_b = 10 - a.size() - 3;
  std::size_t b_count = 0;
  for (int id : enc.ids) b_count += id == *vocab.find("b") ? 1 : 0;
  CHECK(b_count == expected_b);
  CHECK(b_count == 4);
  CHECK(enc.real_length() == 10);
}

TEST_CASE("target is truncated once the context is gone") {
  const auto vocab = small_vocab({"a", "b"});
  const std::vector<std::string> a(20, "a");
  const std::vector<std::string> b(5, "b");
  const auto enc = encode_tokens(a, b, vocab, 10);
  CHECK(enc.real_length() == 10);
  const auto tokens = decode(enc, vocab);
  CHECK(tokens.front() == "[CLS]");
  CHECK(tokens.back() == "[SEP]");
  CHECK(std::count(tokens.begin(), tokens.end(), "[SEP]") == 2);
  CHECK(std::count(tokens.begin(), tokens.end(), "a") == 7);
}

TEST_CASE("encoding preconditions") {
  const auto vocab = small_vocab({"a"});
  const std::vector<std::string> a = {"a"};
  const std::vector<std::string> empty;
  CHECK_THROWS_AS(encode_tokens(a, a, vocab, 7), PreconditionError);
  CHECK_THROWS_AS(encode_tokens(empty, a, vocab, 8), EncodingError);
}

TEST_CASE("decode recovers tokens up to truncation") {
  const std::vector<std::string> corpus = {"the quick brown fox jumps over the lazy dog"};
  const auto vocab = build_vocab(corpus, 1, 200);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> a, b;
    const auto& words = vocab.tokens();
    for (std::size_t i = 0, n = 1 + rng.below(6); i < n; ++i) a.push_back(words[18 + rng.below(words.size() - 18)]);
    for (std::size_t i = 0, n = rng.below(6); i < n; ++i) b.push_back(words[18 + rng.below(words.size() - 18)]);
    const std::size_t max_len = 8 + rng.below(8);
    const auto enc = encode_tokens(a, b, vocab, max_len);
    const auto tokens = decode(enc, vocab);
    REQUIRE(tokens.size() >= 3);
    CHECK(tokens.front() == "[CLS]");
    CHECK(tokens.back() == "[SEP]");
    const auto sep = std::find(tokens.begin() + 1, tokens.end(), "[SEP]");
    const std::vector<std::string> got_a(tokens.begin() + 1, sep);
    const std::vector<std::string> got_b(sep + 1, tokens.end() - 1);
    CHECK(std::equal(got_a.begin(), got_a.end(), a.begin()));
    CHECK(std::equal(got_b.begin(), got_b.end(), b.begin()));
    CHECK(got_a.size() + got_b.size() + 3 <= max_len);
    if (a.size() + b.size() + 3 <= max_len) {
      CHECK(got_a.size() == a.size());
      CHECK(got_b.size() == b.size());
    }
  }
}

TEST_CASE("masking edge rates") {
  const auto vocab = small_vocab({"a", "b", "c"});
  const std::vector<std::string> a = {"a", "b", "c"};
  const std::vector<std::string> b = {"c", "a"};
  const auto enc = encode_tokens(a, b, vocab, 12);
  Rng rng(1);
  MaskingOptions none;
  none.rate = 0.0;
  const auto untouched = mask_for_mlm(enc, vocab, rng, none);
  CHECK(untouched.corrupted == enc);
  CHECK(untouched.targets.empty());

  MaskingOptions all;
  all.rate = 1.0;
  all.mask_fraction = 1.0;
  all.random_fraction = 0.0;
  const auto masked = mask_for_mlm(enc, vocab, rng, all);
  CHECK(masked.targets.size() == 5);
  for (const auto& [pos, original] : masked.targets) {
    CHECK(masked.corrupted.ids[pos] == Vocab::mask_id());
    CHECK(enc.ids[pos] == original);
  }
  CHECK(masked.corrupted.ids[0] == Vocab::cls_id());
}

TEST_CASE("masking never selects structural tokens") {
  const auto vocab = small_vocab({"a", "b", "c", "d"});
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto seq = testing::random_sequence(vocab.size(), 16, 4 + rng.below(12), rng);
    MaskingOptions options;
    options.rate = 0.5;
    const auto ex = mask_for_mlm(seq, vocab, rng, options);
    for (const auto& [pos, original] : ex.targets) {
      CHECK(seq.attention_mask[pos] == 1);
      CHECK(original != Vocab::cls_id());
      CHECK(original != Vocab::sep_id());
      CHECK(original != Vocab::pad_id());
    }
    for (std::size_t i = 0; i < seq.ids.size(); ++i) {
      if (!ex.targets.count(i)) CHECK(ex.corrupted.ids[i] == seq.ids[i]);
    }
    CHECK(ex.corrupted.segments == seq.segments);
    CHECK(ex.corrupted.attention_mask == seq.attention_mask);
  }
}

TEST_CASE("masking split between mask, random and kept") {
  const auto vocab = small_vocab({"a", "b", "c", "d", "e", "f", "g", "h"});
  Rng rng(21);
  std::size_t masked = 0, random = 0, kept = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const auto seq = testing::random_sequence(vocab.size(), 16, 16, rng);
    const auto ex = mask_for_mlm(seq, vocab, rng);
    for (const auto& [pos, original] : ex.targets) {
      const int now = ex.corrupted.ids[pos];
      if (now == Vocab::mask_id()) {
        ++masked;
      } else if (now == original) {
        ++kept;
      } else {
        ++random;
        CHECK(now >= 5);
      }
    }
  }
  const double total = static_cast<double>(masked + random + kept);
  CHECK(masked / total == doctest::Approx(0.8).epsilon(0.03));
  // Random replacements may land on the original token, so "kept" absorbs a
  // little of the random share.
  CHECK((random + kept) / total == doctest::Approx(0.2).epsilon(0.1));
}

TEST_CASE("scene corpus reader") {
  std::ifstream in(testing::data_path("two_scenes.txt"));
  const auto scenes = read_scene_corpus(in);
  REQUIRE(scenes.size() == 2);
  CHECK(scenes[0].size() == 4);
  CHECK(scenes[1].size() == 3);
  CHECK(scenes[1][0] == "Hi.");
}

TEST_CASE("sentence pair sampling") {
  std::ifstream in(testing::data_path("two_scenes.txt"));
  const auto scenes = read_scene_corpus(in);
  Rng rng(3);
  CHECK(sample_sentence_pairs(scenes, 0, rng).empty());
  const auto pairs = sample_sentence_pairs(scenes, 200, rng);
  for (const auto& p : pairs) {
    const bool same_first = std::find(scenes[0].begin(), scenes[0].end(), p.first) != scenes[0].end();
    const auto& own = same_first ? scenes[0] : scenes[1];
    const auto& other = same_first ? scenes[1] : scenes[0];
    if (p.is_next) {
      const auto it = std::find(own.begin(), own.end(), p.first);
      REQUIRE(it + 1 != own.end());
      CHECK(*(it + 1) == p.second);
    } else {
      CHECK(std::find(other.begin(), other.end(), p.second) != other.end());
    }
  }
  const std::vector<Scene> one = {scenes[0]};
  CHECK_THROWS_AS(sample_sentence_pairs(one, 5, rng), PreconditionError);
}

TEST_CASE("sentence pair sampling matches the frozen golden list") {
  std::ifstream in(testing::data_path("two_scenes.txt"));
  const auto scenes = read_scene_corpus(in);
  Rng rng(2024);
  const auto pairs = sample_sentence_pairs(scenes, 12, rng);
  std::ostringstream got;
  for (const auto& p : pairs) got << (p.is_next ? 1 : 0) << '\t' << p.first << '\t' << p.second << '\n';
  CHECK(got.str() == testing::read_text(testing::data_path("nsp_golden.txt")));
}

TEST_CASE("sampling is reproducible under a seed") {
  const auto scenes = testing::toy_scenes(10, 4);
  Rng a(77), b(77);
  CHECK(sample_sentence_pairs(scenes, 100, a) == sample_sentence_pairs(scenes, 100, b));
}
