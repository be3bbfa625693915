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

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace causalemo {

/// The eight annotation outcomes of EmotionLines: Ekman's six emotions,
/// neutral, and non-neutral (no majority).
enum class EmotionLabel {
  anger,
  disgust,
  fear,
  joy,
  sadness,
  surprise,
  neutral,
  non_neutral,
};

inline constexpr std::array<EmotionLabel, 8> kAllEmotions = {
    EmotionLabel::anger,   EmotionLabel::disgust,  EmotionLabel::fear,
    EmotionLabel::joy,     EmotionLabel::sadness,  EmotionLabel::surprise,
    EmotionLabel::neutral, EmotionLabel::non_neutral,
};

/// Labels scored during evaluation, in report/class-index order.
inline constexpr std::array<EmotionLabel, 4> kEvaluationLabels = {
    EmotionLabel::anger,
    EmotionLabel::joy,
    EmotionLabel::neutral,
    EmotionLabel::sadness,
};

enum class DatasetSource { friends, emotionpush };

/// Canonical lowercase name, e.g. "non-neutral".
std::string_view to_string(EmotionLabel label) noexcept;

/// Capitalized name used in report rows, e.g. "Anger".
std::string_view display_name(EmotionLabel label) noexcept;

/// Case-insensitive. Accepts both "non-neutral" and "non_neutral".
std::optional<EmotionLabel> parse_emotion(std::string_view text) noexcept;

/// Position of `label` in kEvaluationLabels, if it is one of them.
std::optional<int> evaluation_index(EmotionLabel label) noexcept;

std::string_view to_string(DatasetSource source) noexcept;
std::optional<DatasetSource> parse_source(std::string_view text) noexcept;

}  // namespace causalemo
