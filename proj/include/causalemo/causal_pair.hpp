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

#include <optional>
#include <string>
#include <string_view>

#include "causalemo/emotion.hpp"

namespace causalemo {

/// Literal placed in the context slot of a dialogue's first utterance.
inline constexpr std::string_view kNoneToken = "[None]";

/// One training example: a target utterance (sentence A) paired with the
/// utterance immediately before it (sentence B).
struct CausalPair {
  std::string target_text;
  std::string context_text;
  std::string target_speaker;
  std::optional<std::string> context_speaker;  // empty for the sentinel
  std::optional<EmotionLabel> label;
  DatasetSource source = DatasetSource::friends;

  bool has_context() const { return context_speaker.has_value(); }

  friend bool operator==(const CausalPair&, const CausalPair&) = default;
};

}  // namespace causalemo
