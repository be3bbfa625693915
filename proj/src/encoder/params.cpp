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

#include "causalemo/encoder.hpp"

#include "causalemo/errors.hpp"

namespace causalemo {

void ModelConfig::validate() const {
  if (d_model == 0 || n_heads == 0 || n_layers == 0 || d_ff == 0 || max_len == 0 ||
      vocab_size == 0 || n_labels == 0) {
    throw ConfigError("model sizes must all be positive");
  }
  if (d_model % n_heads != 0) {
    throw ConfigError("d_model " + std::to_string(d_model) + " is not divisible by n_heads " +
                      std::to_string(n_heads));
  }
  if (max_len > 512) throw ConfigError("max_len above 512 is not supported");
  if (!(dropout_head >= 0.0 && dropout_head < 1.0)) {
    throw ConfigError("dropout_head must lie in [0, 1)");
  }
  if (!(init_std > 0.0)) throw ConfigError("init_std must be positive");
  if (!(layer_norm_eps > 0.0)) throw ConfigError("layer_norm_eps must be positive");
}

ModelParams ModelParams::zeros(const ModelConfig& config) {
  const auto d = static_cast<Eigen::Index>(config.d_model);
  const auto ff = static_cast<Eigen::Index>(config.d_ff);
  const auto vocab = static_cast<Eigen::Index>(config.vocab_size);
  const auto k = static_cast<Eigen::Index>(config.n_labels);

  ModelParams p;
  p.token_embedding = Matrix::Zero(vocab, d);
  p.position_embedding = Matrix::Zero(static_cast<Eigen::Index>(config.max_len), d);
  p.segment_embedding = Matrix::Zero(2, d);
  p.layers.resize(config.n_layers);
  for (auto& layer : p.layers) {
    for (Matrix* w : {&layer.query_weight, &layer.key_weight, &layer.value_weight,
                      &layer.output_weight}) {
      *w = Matrix::Zero(d, d);
    }
    for (Matrix* b : {&layer.query_bias, &layer.key_bias, &layer.value_bias, &layer.output_bias,
                      &layer.attention_norm_scale, &layer.attention_norm_shift,
                      &layer.ffn_out_bias, &layer.ffn_norm_scale, &layer.ffn_norm_shift}) {
      *b = Matrix::Zero(1, d);
    }
    layer.ffn_in_weight = Matrix::Zero(d, ff);
    layer.ffn_in_bias = Matrix::Zero(1, ff);
    layer.ffn_out_weight = Matrix::Zero(ff, d);
  }
  p.head_weight = Matrix::Zero(k, d);
  p.head_bias = Matrix::Zero(1, k);
  p.mlm_bias = Matrix::Zero(1, vocab);
  p.nsp_weight = Matrix::Zero(2, d);
  p.nsp_bias = Matrix::Zero(1, 2);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelParams p = zeros(config);
  p.for_each([&](const std::string& name, Matrix& tensor) {
    if (name.ends_with("norm.scale")) {
      tensor.setOnes();
    } else if (name.ends_with(".weight") || name.starts_with("embeddings.")) {
      for (Eigen::Index i = 0; i < tensor.size(); ++i) {
        tensor.data()[i] = config.init_std * rng.normal();
      }
    }
  });
  return p;
}

void ModelParams::set_zero() {
  for_each([](const std::string&, Matrix& tensor) { tensor.setZero(); });
}

bool ModelParams::all_finite() const {
  bool finite = true;
  for_each([&](const std::string&, const Matrix& tensor) { finite = finite && tensor.allFinite(); });
  return finite;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const Matrix& tensor) {
    n += static_cast<std::size_t>(tensor.size());
  });
  return n;
}

void reset_classification_head(ModelParams& params, ModelConfig& config, std::size_t n_labels,
                               Rng& rng) {
  if (n_labels == 0) throw ConfigError("classification head needs at least one label");
  config.n_labels = n_labels;
  const auto k = static_cast<Eigen::Index>(n_labels);
  params.head_weight = Matrix::Zero(k, static_cast<Eigen::Index>(config.d_model));
  for (Eigen::Index i = 0; i < params.head_weight.size(); ++i) {
    params.head_weight.data()[i] = config.init_std * rng.normal();
  }
  params.head_bias = Matrix::Zero(1, k);
}

}  // namespace causalemo
