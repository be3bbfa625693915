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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace causalemo::detail {

/// Byte offsets of UTF-8 code point starts, plus text.size() at the end.
inline std::vector<std::size_t> utf8_boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  out.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(text.size());
  return out;
}

/// Whitespace / ASCII-punctuation split. A bracketed run accepted by
/// `is_reserved` is emitted whole and keeps its case.
template <class ReservedPredicate>
std::vector<std::string> split_words(std::string_view text, const ReservedPredicate& is_reserved,
                                     bool lowercase) {
  std::vector<std::string> words;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '[') {
      const std::size_t close = text.find(']', i);
      if (close != std::string_view::npos) {
        const std::string_view candidate = text.substr(i, close - i + 1);
        if (is_reserved(candidate)) {
          flush();
          words.emplace_back(candidate);
          i = close + 1;
          continue;
        }
      }
    }
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      words.emplace_back(1, static_cast<char>(c));
    } else {
      current.push_back(lowercase && c < 0x80 ? static_cast<char>(std::tolower(c))
                                              : static_cast<char>(c));
    }
    ++i;
  }
  flush();
  return words;
}

}  // namespace causalemo::detail
