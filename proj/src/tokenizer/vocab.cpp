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
#include <array>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>

#include "causalemo/errors.hpp"
#include "causalemo/tokenizer.hpp"
#include "tokenizer/text_split.hpp"

namespace causalemo {
namespace {

bool is_bracketed(const std::string& token) {
  return token.size() >= 3 && token.front() == '[' && token.back() == ']' &&
         std::none_of(token.begin(), token.end(),
                      [](unsigned char c) { return std::isspace(c) != 0; });
}

// Orders (token, count) by descending count, then lexicographically.
std::vector<std::string> ranked(const std::map<std::string, std::size_t>& counts,
                                std::size_t min_freq) {
  std::vector<std::pair<std::string, std::size_t>> items;
  for (const auto& [token, count] : counts) {
    if (count >= min_freq) items.emplace_back(token, count);
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& item : items) out.push_back(std::move(item.first));
  return out;
}

}  // namespace

std::vector<std::string> reserved_tokens(const SpeakerTokenPolicy& policy) {
  std::vector<std::string> tokens = {
      std::string(kPadToken), std::string(kUnkToken), std::string(kClsToken),
      std::string(kSepToken), std::string(kMaskToken), std::string(kNoneToken),
      "[URL]",                "[EMPTY]",              "[PERSON]",
      "[ORG]",                "[TIME]",
  };
  for (auto& token : policy.tokens()) {
    if (std::find(tokens.begin(), tokens.end(), token) == tokens.end()) {
      tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  static const std::array<std::string_view, 5> core = {kPadToken, kUnkToken, kClsToken,
                                                       kSepToken, kMaskToken};
  if (tokens.size() < core.size()) {
    throw ValidationError("vocabulary has fewer than the 5 core special tokens");
  }
  for (std::size_t i = 0; i < core.size(); ++i) {
    if (tokens[i] != core[i]) {
      throw ValidationError("vocabulary id " + std::to_string(i) + " must be " +
                            std::string(core[i]) + ", found " + tokens[i]);
    }
  }
  Vocab vocab;
  vocab.index_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) throw ValidationError("empty token at id " + std::to_string(i));
    if (!vocab.index_.emplace(tokens[i], static_cast<int>(i)).second) {
      throw ValidationError("duplicate token \"" + tokens[i] + "\"");
    }
  }
  std::size_t reserved = 0;
  while (reserved < tokens.size() && is_bracketed(tokens[reserved])) ++reserved;
  vocab.n_reserved_ = reserved;
  vocab.tokens_ = std::move(tokens);
  return vocab;
}

Vocab Vocab::load(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  return from_tokens(std::move(tokens));
}

void Vocab::save(std::ostream& out) const {
  for (const auto& token : tokens_) out << token << '\n';
}

std::optional<int> Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Vocab::id_or_unk(std::string_view token) const {
  return find(token).value_or(unk_id());
}

std::uint64_t Vocab::checksum() const {
  std::uint64_t hash = 1469598103934665603ULL;
  for (const auto& token : tokens_) {
    for (unsigned char c : token) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
    hash ^= static_cast<unsigned char>('\n');
    hash *= 1099511628211ULL;
  }
  return hash;
}

Vocab build_vocab(std::span<const std::string> corpus, std::size_t min_freq,
                  std::size_t size_cap, const VocabOptions& options) {
  std::vector<std::string> tokens = reserved_tokens(options.speakers);
  if (size_cap < tokens.size()) {
    throw ConfigError("vocabulary size cap " + std::to_string(size_cap) +
                      " is below the " + std::to_string(tokens.size()) + " reserved tokens");
  }
  const std::unordered_set<std::string> reserved(tokens.begin(), tokens.end());
  const auto is_reserved = [&](std::string_view t) { return reserved.contains(std::string(t)); };

  std::map<std::string, std::size_t> word_counts;
  for (const auto& text : corpus) {
    for (auto& word : detail::split_words(text, is_reserved, options.lowercase)) {
      if (!reserved.contains(word)) ++word_counts[word];
    }
  }

  std::map<std::string, std::size_t> piece_counts;
  for (const auto& [word, count] : word_counts) {
    const auto chars = detail::utf8_boundaries(word);
    const std::size_t n_chars = chars.size() - 1;
    piece_counts[word.substr(0, chars[1])] += count;
    for (std::size_t k = 1; k < n_chars; ++k) {
      const std::string continuation = std::string(kContinuationPrefix);
      piece_counts[continuation + word.substr(chars[k], chars[k + 1] - chars[k])] += count;
      const std::size_t suffix_len = n_chars - k;
      if (suffix_len >= 2 && suffix_len <= 4) {
        piece_counts[continuation + word.substr(chars[k])] += count;
      }
    }
  }

  std::unordered_set<std::string> seen(tokens.begin(), tokens.end());
  const auto append = [&](const std::vector<std::string>& candidates) {
    for (const auto& candidate : candidates) {
      if (tokens.size() >= size_cap) return;
      if (seen.insert(candidate).second) tokens.push_back(candidate);
    }
  };
  append(ranked(word_counts, std::max<std::size_t>(min_freq, 1)));
  append(ranked(piece_counts, std::max<std::size_t>(min_freq, 1)));
  return Vocab::from_tokens(std::move(tokens));
}

}  // namespace causalemo
