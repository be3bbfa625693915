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
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "causalemo/causal_pair.hpp"
#include "causalemo/random.hpp"
#include "causalemo/textprep.hpp"

namespace causalemo {

inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kContinuationPrefix = "##";

/// Reserved tokens in id order: [PAD] [UNK] [CLS] [SEP] [MASK] [None]
/// [URL] [EMPTY] [PERSON] [ORG] [TIME], then the policy's says-token and
/// speaker tokens.
std::vector<std::string> reserved_tokens(const SpeakerTokenPolicy& policy);

/// Dense token<->id table. Ids 0..4 are always [PAD] [UNK] [CLS] [SEP] [MASK].
class Vocab {
 public:
  Vocab() = default;

  /// Throws ValidationError on duplicates or when the five core special
  /// tokens are not at ids 0..4. The leading run of bracketed tokens is
  /// taken as the reserved block.
  static Vocab from_tokens(std::vector<std::string> tokens);

  static Vocab load(std::istream& in);
  void save(std::ostream& out) const;

  std::size_t size() const { return tokens_.size(); }
  std::size_t reserved_count() const { return n_reserved_; }

  std::optional<int> find(std::string_view token) const;
  int id_or_unk(std::string_view token) const;
  const std::string& token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  bool contains(std::string_view token) const { return find(token).has_value(); }
  bool is_reserved(int id) const { return id >= 0 && static_cast<std::size_t>(id) < n_reserved_; }

  /// FNV-1a over the newline-joined token list.
  std::uint64_t checksum() const;

  const std::vector<std::string>& tokens() const { return tokens_; }

  static constexpr int pad_id() { return 0; }
  static constexpr int unk_id() { return 1; }
  static constexpr int cls_id() { return 2; }
  static constexpr int sep_id() { return 3; }
  static constexpr int mask_id() { return 4; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
  std::size_t n_reserved_ = 5;
};

struct VocabOptions {
  bool lowercase = true;
  SpeakerTokenPolicy speakers = SpeakerTokenPolicy::friends_main_cast();
};

/// Reserved tokens, then whole words, then subword pieces, each group by
/// descending frequency with lexicographic tie-breaks. Words and pieces
/// below `min_freq` are skipped; the table stops at `size_cap` entries.
/// Throws ConfigError when size_cap cannot hold the reserved tokens.
Vocab build_vocab(std::span<const std::string> corpus, std::size_t min_freq,
                  std::size_t size_cap, const VocabOptions& options = {});

/// Splits on whitespace and punctuation. Reserved bracketed tokens present
/// in `vocab` stay whole and keep their case; other text is lowercased when
/// `lowercase` is set.
std::vector<std::string> pre_tokenize(std::string_view text, const Vocab& vocab, bool lowercase);

/// Greedy longest-match-first WordPiece over pre_tokenize's words.
std::vector<std::string> wordpiece_tokenize(std::string_view text, const Vocab& vocab,
                                            bool lowercase = false);

/// Fixed-length encoder input.
struct EncodedSequence {
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<int> attention_mask;
  std::optional<EmotionLabel> label;

  std::size_t max_len() const { return ids.size(); }
  std::size_t real_length() const;

  friend bool operator==(const EncodedSequence&, const EncodedSequence&) = default;
};

/// Lays out [CLS] A [SEP] B [SEP] [PAD]... and truncates B from its end,
/// then A from its end, until it fits. Throws EncodingError when A ends up
/// empty and PreconditionError when max_len < 8.
EncodedSequence encode_tokens(std::span<const std::string> sentence_a,
                              std::span<const std::string> sentence_b, const Vocab& vocab,
                              std::size_t max_len);

EncodedSequence encode_pair(const CausalPair& pair, const Vocab& vocab, std::size_t max_len,
                            bool lowercase);

/// Token strings of the real (unpadded) positions.
std::vector<std::string> decode(const EncodedSequence& sequence, const Vocab& vocab);

struct MaskingOptions {
  double rate = 0.15;
  double mask_fraction = 0.8;    // selected -> [MASK]
  double random_fraction = 0.1;  // selected -> random token; rest unchanged
};

struct MLMExample {
  EncodedSequence corrupted;
  std::map<std::size_t, int> targets;  // position -> original id
};

/// Selects each non-special real position independently with
/// probability `options.rate`. [CLS], [SEP] and [PAD] are never selected.
MLMExample mask_for_mlm(const EncodedSequence& sequence, const Vocab& vocab, Rng& rng,
                        const MaskingOptions& options = {});

using Scene = std::vector<std::string>;

/// One utterance per line; a blank line closes a scene.
std::vector<Scene> read_scene_corpus(std::istream& in);

struct SentencePair {
  std::string first;
  std::string second;
  bool is_next = false;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

/// Half the draws (in expectation) pair consecutive utterances of a scene;
/// the rest pair the first sentence with a random utterance of another
/// scene. Requires at least two scenes with two utterances each.
std::vector<SentencePair> sample_sentence_pairs(std::span<const Scene> scenes, std::size_t n,
                                                Rng& rng);

struct NSPExample {
  EncodedSequence encoded;
  bool is_next = false;
};

std::vector<NSPExample> sample_nsp_pairs(std::span<const Scene> scenes, std::size_t n,
                                         const Vocab& vocab, std::size_t max_len,
                                         bool lowercase, Rng& rng);

}  // namespace causalemo
