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

#include <istream>

#include "causalemo/errors.hpp"
#include "causalemo/tokenizer.hpp"

namespace causalemo {

MLMExample mask_for_mlm(const EncodedSequence& sequence, const Vocab& vocab, Rng& rng,
                        const MaskingOptions& options) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < sequence.ids.size(); ++i) {
    const int id = sequence.ids[i];
    if (sequence.attention_mask[i] == 1 && id != Vocab::cls_id() && id != Vocab::sep_id() &&
        id != Vocab::pad_id()) {
      candidates.push_back(i);
    }
  }
  if (candidates.empty()) {
    throw PreconditionError("mask_for_mlm: sequence has no maskable tokens");
  }

  // Random replacements are drawn from ordinary ids so the [CLS]/[SEP]
  // layout survives corruption.
  constexpr int first_ordinary = Vocab::mask_id() + 1;
  const std::size_t n_ordinary =
      vocab.size() > static_cast<std::size_t>(first_ordinary) ? vocab.size() - first_ordinary : 0;

  MLMExample out;
  out.corrupted = sequence;
  for (std::size_t pos : candidates) {
    if (!rng.bernoulli(options.rate)) continue;
    const int original = sequence.ids[pos];
    out.targets.emplace(pos, original);
    const double r = rng.uniform();
    if (r < options.mask_fraction) {
      out.corrupted.ids[pos] = Vocab::mask_id();
    } else if (r < options.mask_fraction + options.random_fraction && n_ordinary > 0) {
      out.corrupted.ids[pos] = first_ordinary + static_cast<int>(rng.below(n_ordinary));
    }
  }
  return out;
}

std::vector<Scene> read_scene_corpus(std::istream& in) {
  std::vector<Scene> scenes;
  Scene current;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (!current.empty()) scenes.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(line);
    }
  }
  if (!current.empty()) scenes.push_back(std::move(current));
  return scenes;
}

std::vector<SentencePair> sample_sentence_pairs(std::span<const Scene> scenes, std::size_t n,
                                                Rng& rng) {
  if (n == 0) return {};
  if (scenes.size() < 2) {
    throw PreconditionError("next-sentence sampling needs at least two scenes");
  }
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (scenes[s].size() < 2) {
      throw PreconditionError("scene " + std::to_string(s) + " has fewer than two utterances");
    }
  }

  std::vector<SentencePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = rng.below(scenes.size());
    const Scene& scene = scenes[s];
    const std::size_t t = rng.below(scene.size() - 1);
    SentencePair pair;
    pair.first = scene[t];
    if (rng.bernoulli(0.5)) {
      pair.second = scene[t + 1];
      pair.is_next = true;
    } else {
      std::size_t other = rng.below(scenes.size() - 1);
      if (other >= s) ++other;
      const Scene& donor = scenes[other];
      pair.second = donor[rng.below(donor.size())];
      pair.is_next = false;
    }
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<NSPExample> sample_nsp_pairs(std::span<const Scene> scenes, std::size_t n,
                                         const Vocab& vocab, std::size_t max_len,
                                         bool lowercase, Rng& rng) {
  std::vector<NSPExample> out;
  out.reserve(n);
  for (auto& pair : sample_sentence_pairs(scenes, n, rng)) {
    const auto a = wordpiece_tokenize(pair.first, vocab, lowercase);
    const auto b = wordpiece_tokenize(pair.second, vocab, lowercase);
    out.push_back({encode_tokens(a, b, vocab, max_len), pair.is_next});
  }
  return out;
}

}  // namespace causalemo
