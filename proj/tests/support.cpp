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

#include "support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace causalemo::testing {

std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CAUSALEMO_TEST_DATA) / name;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ModelConfig tiny_config(std::size_t vocab_size, std::size_t max_len) {
  ModelConfig config;
  config.d_model = 8;
  config.n_heads = 2;
  config.n_layers = 2;
  config.d_ff = 16;
  config.max_len = max_len;
  config.vocab_size = vocab_size;
  config.n_labels = 4;
  config.init_std = 0.5;
  config.layer_norm_eps = 1e-12;
  return config;
}

EncodedSequence random_sequence(std::size_t vocab_size, std::size_t max_len,
                                std::size_t real_length, Rng& rng) {
  EncodedSequence seq;
  seq.ids.assign(max_len, Vocab::pad_id());
  seq.segments.assign(max_len, 0);
  seq.attention_mask.assign(max_len, 0);
  const std::size_t split = 1 + real_length / 2;
  for (std::size_t i = 0; i < real_length; ++i) {
    seq.ids[i] = 5 + static_cast<int>(rng.below(vocab_size - 5));
    seq.segments[i] = i >= split ? 1 : 0;
    seq.attention_mask[i] = 1;
  }
  seq.ids[0] = Vocab::cls_id();
  seq.ids[split - 1] = Vocab::sep_id();
  seq.ids[real_length - 1] = Vocab::sep_id();
  return seq;
}

GradientCheck check_gradients(const ModelParams& params, const ModelParams& analytic,
                              const std::function<double(const ModelParams&)>& loss, double h,
                              double floor) {
  std::vector<const Matrix*> expected;
  analytic.for_each([&](const std::string&, const Matrix& m) { expected.push_back(&m); });
  ModelParams probe = params;
  std::vector<std::pair<std::string, Matrix*>> tensors;
  probe.for_each([&](const std::string& name, Matrix& m) { tensors.emplace_back(name, &m); });

  GradientCheck out;
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    auto& [name, tensor] = tensors[t];
    Matrix numeric(tensor->rows(), tensor->cols());
    for (Eigen::Index i = 0; i < tensor->size(); ++i) {
      double& entry = tensor->data()[i];
      const double saved = entry;
      entry = saved + h;
      const double up = loss(probe);
      entry = saved - h;
      const double down = loss(probe);
      entry = saved;
      numeric.data()[i] = (up - down) / (2.0 * h);
      ++out.entries;
    }
    const Matrix& exact = *expected[t];
    const double denom = std::max({numeric.norm(), exact.norm(), floor});
    const double error = (numeric - exact).norm() / denom;
    out.per_tensor[name] = error;
    if (error >= out.max_relative_error) {
      out.max_relative_error = error;
      out.worst_tensor = name;
    }
  }
  return out;
}

namespace {

constexpr std::array<const char*, 12> kFiller = {
    "the", "we", "went", "to", "that", "place", "again", "today", "and", "it", "was", "so"};

constexpr std::array<const char*, 6> kSpeakers = {"Ross", "Rachel", "Monica",
                                                  "Joey", "Mike", "Janice"};

}  // namespace

DialogueSet keyword_corpus(std::size_t n_dialogues, std::uint64_t seed) {
  const std::array<std::pair<EmotionLabel, const char*>, 4> keywords = {{
      {EmotionLabel::anger, "furious"},
      {EmotionLabel::joy, "delighted"},
      {EmotionLabel::neutral, "okay"},
      {EmotionLabel::sadness, "miserable"},
  }};
  Rng rng(seed);
  std::vector<Dialogue> dialogues;
  for (std::size_t d = 0; d < n_dialogues; ++d) {
    Dialogue dialogue;
    const std::size_t n_utterances = 3 + rng.below(3);
    for (std::size_t u = 0; u < n_utterances; ++u) {
      const auto& [label, keyword] = keywords[rng.below(keywords.size())];
      std::string text;
      const std::size_t n_words = 3 + rng.below(4);
      const std::size_t slot = rng.below(n_words);
      for (std::size_t w = 0; w < n_words; ++w) {
        if (!text.empty()) text += ' ';
        text += w == slot ? keyword : kFiller[rng.below(kFiller.size())];
      }
      Utterance utterance;
      utterance.speaker = kSpeakers[rng.below(kSpeakers.size())];
      utterance.text = text + ".";
      utterance.emotion = label;
      utterance.dialogue_index = d;
      dialogue.utterances.push_back(std::move(utterance));
    }
    dialogues.push_back(std::move(dialogue));
  }
  return DialogueSet(std::move(dialogues));
}

std::vector<Scene> toy_scenes(std::size_t n_scenes, std::uint64_t seed) {
  constexpr std::array<const char*, 16> words = {
      "coffee", "central", "perk", "apartment", "door", "knock", "hello", "there",
      "what", "happened", "nothing", "really", "come", "on", "yes", "no"};
  Rng rng(seed);
  std::vector<Scene> scenes;
  for (std::size_t s = 0; s < n_scenes; ++s) {
    Scene scene;
    const std::size_t n_lines = 2 + rng.below(5);
    for (std::size_t l = 0; l < n_lines; ++l) {
      std::string line;
      const std::size_t n_words = 2 + rng.below(5);
      for (std::size_t w = 0; w < n_words; ++w) {
        if (!line.empty()) line += ' ';
        line += words[rng.below(words.size())];
      }
      scene.push_back(line + " " + std::to_string(s % 10));
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

}  // namespace causalemo::testing
