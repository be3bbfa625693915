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

#include "causalemo/emotion.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace causalemo {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(EmotionLabel label) noexcept {
  switch (label) {
    case EmotionLabel::anger: return "anger";
    case EmotionLabel::disgust: return "disgust";
    case EmotionLabel::fear: return "fear";
    case EmotionLabel::joy: return "joy";
    case EmotionLabel::sadness: return "sadness";
    case EmotionLabel::surprise: return "surprise";
    case EmotionLabel::neutral: return "neutral";
    case EmotionLabel::non_neutral: return "non-neutral";
  }
  return "unknown";
}

std::string_view display_name(EmotionLabel label) noexcept {
  switch (label) {
    case EmotionLabel::anger: return "Anger";
    case EmotionLabel::disgust: return "Disgust";
    case EmotionLabel::fear: return "Fear";
    case EmotionLabel::joy: return "Joy";
    case EmotionLabel::sadness: return "Sadness";
    case EmotionLabel::surprise: return "Surprise";
    case EmotionLabel::neutral: return "Neutral";
    case EmotionLabel::non_neutral: return "Non-neutral";
  }
  return "Unknown";
}

std::optional<EmotionLabel> parse_emotion(std::string_view text) noexcept {
  const std::string key = lower(text);
  if (key == "non_neutral") return EmotionLabel::non_neutral;
  for (EmotionLabel label : kAllEmotions) {
    if (key == to_string(label)) return label;
  }
  return std::nullopt;
}

std::optional<int> evaluation_index(EmotionLabel label) noexcept {
  for (std::size_t i = 0; i < kEvaluationLabels.size(); ++i) {
    if (kEvaluationLabels[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::string_view to_string(DatasetSource source) noexcept {
  return source == DatasetSource::friends ? "friends" : "emotionpush";
}

std::optional<DatasetSource> parse_source(std::string_view text) noexcept {
  const std::string key = lower(text);
  if (key == "friends") return DatasetSource::friends;
  if (key == "emotionpush") return DatasetSource::emotionpush;
  return std::nullopt;
}

}  // namespace causalemo
