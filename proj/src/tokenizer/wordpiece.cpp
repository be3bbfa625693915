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

#include <algorithm>

#include "causalemo/errors.hpp"
#include "causalemo/tokenizer.hpp"
#include "tokenizer/text_split.hpp"

namespace causalemo {
namespace {

constexpr std::size_t kMaxCharsPerWord = 100;

}  // namespace

std::vector<std::string> pre_tokenize(std::string_view text, const Vocab& vocab, bool lowercase) {
  return detail::split_words(
      text,
      [&](std::string_view candidate) {
        const auto id = vocab.find(candidate);
        return id && vocab.is_reserved(*id);
      },
      lowercase);
}

std::vector<std::string> wordpiece_tokenize(std::string_view text, const Vocab& vocab,
                                            bool lowercase) {
  std::vector<std::string> output;
  for (const auto& word : pre_tokenize(text, vocab, lowercase)) {
    if (const auto id = vocab.find(word); id && vocab.is_reserved(*id)) {
      output.push_back(word);
      continue;
    }
    const auto bounds = detail::utf8_boundaries(word);
    const std::size_t n_chars = bounds.size() - 1;
    if (n_chars > kMaxCharsPerWord) {
      output.emplace_back(kUnkToken);
      continue;
    }
    std::vector<std::string> pieces;
    bool matched_all = true;
    std::size_t start = 0;
    while (start < n_chars) {
      std::size_t end = n_chars;
      std::string found;
      while (start < end) {
        std::string candidate = word.substr(bounds[start], bounds[end] - bounds[start]);
        if (start > 0) candidate.insert(0, kContinuationPrefix);
        if (vocab.contains(candidate)) {
          found = std::move(candidate);
          break;
        }
        --end;
      }
      if (found.empty()) {
        matched_all = false;
        break;
      }
      pieces.push_back(std::move(found));
      start = end;
    }
    if (matched_all) {
      output.insert(output.end(), pieces.begin(), pieces.end());
    } else {
      output.emplace_back(kUnkToken);
    }
  }
  return output;
}

std::size_t EncodedSequence::real_length() const {
  return static_cast<std::size_t>(std::count(attention_mask.begin(), attention_mask.end(), 1));
}

EncodedSequence encode_tokens(std::span<const std::string> sentence_a,
                              std::span<const std::string> sentence_b, const Vocab& vocab,
                              std::size_t max_len) {
  if (max_len < 8) {
    throw PreconditionError("max_len must be at least 8, got " + std::to_string(max_len));
  }
  // Context loses its tail first; the target only once the context is gone.
  const std::size_t budget = max_len - 3;
  const std::size_t a_len = std::min(sentence_a.size(), budget);
  const std::size_t b_len = std::min(sentence_b.size(), budget - a_len);
  if (a_len == 0) throw EncodingError("target sentence is empty after tokenization");

  EncodedSequence out;
  out.ids.assign(max_len, Vocab::pad_id());
  out.segments.assign(max_len, 0);
  out.attention_mask.assign(max_len, 0);
  std::size_t pos = 0;
  const auto put = [&](int id, int segment) {
    out.ids[pos] = id;
    out.segments[pos] = segment;
    out.attention_mask[pos] = 1;
    ++pos;
  };
  put(Vocab::cls_id(), 0);
  for (std::size_t i = 0; i < a_len; ++i) put(vocab.id_or_unk(sentence_a[i]), 0);
  put(Vocab::sep_id(), 0);
  for (std::size_t i = 0; i < b_len; ++i) put(vocab.id_or_unk(sentence_b[i]), 1);
  put(Vocab::sep_id(), 1);
  return out;
}

EncodedSequence encode_pair(const CausalPair& pair, const Vocab& vocab, std::size_t max_len,
                            bool lowercase) {
  const auto a = wordpiece_tokenize(pair.target_text, vocab, lowercase);
  const auto b = wordpiece_tokenize(pair.context_text, vocab, lowercase);
  EncodedSequence out = encode_tokens(a, b, vocab, max_len);
  out.label = pair.label;
  return out;
}

std::vector<std::string> decode(const EncodedSequence& sequence, const Vocab& vocab) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < sequence.ids.size(); ++i) {
    if (sequence.attention_mask[i] == 1) out.push_back(vocab.token(sequence.ids[i]));
  }
  return out;
}

}  // namespace causalemo
