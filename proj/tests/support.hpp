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

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "causalemo/corpus.hpp"
#include "causalemo/encoder.hpp"
#include "causalemo/random.hpp"
#include "causalemo/tokenizer.hpp"
#include "causalemo/train.hpp"

namespace causalemo::testing {

std::filesystem::path data_path(const std::string& name);
std::string read_text(const std::filesystem::path& path);

// Two layers, two heads, width 8: small enough for finite differences.
ModelConfig tiny_config(std::size_t vocab_size, std::size_t max_len = 12);

// Deterministic non-degenerate inputs for tiny models.
EncodedSequence random_sequence(std::size_t vocab_size, std::size_t max_len,
                                std::size_t real_length, Rng& rng);

struct GradientCheck {
  double max_relative_error = 0.0;
  std::string worst_tensor;
  std::map<std::string, double> per_tensor;  // relative error by tensor
  std::size_t entries = 0;
};

// Central differences with step h on every entry of every tensor. The
// error of a tensor is |a - n| / max(|a|, |n|, floor) in the Frobenius norm.
GradientCheck check_gradients(const ModelParams& params, const ModelParams& analytic,
                              const std::function<double(const ModelParams&)>& loss, double h,
                              double floor);

// Dialogues whose every utterance carries one keyword that decides its
// evaluation label, padded with shared filler words.
DialogueSet keyword_corpus(std::size_t n_dialogues, std::uint64_t seed);

// Scenes of short synthetic lines drawn from a fixed word list.
std::vector<Scene> toy_scenes(std::size_t n_scenes, std::uint64_t seed);

}  // namespace causalemo::testing
