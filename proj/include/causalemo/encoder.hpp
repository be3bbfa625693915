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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causalemo/random.hpp"
#include "causalemo/tokenizer.hpp"

namespace causalemo {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

struct ModelConfig {
  std::size_t d_model = 128;
  std::size_t n_heads = 4;
  std::size_t n_layers = 2;
  std::size_t d_ff = 512;
  std::size_t max_len = 113;
  std::size_t vocab_size = 0;
  std::size_t n_labels = 4;
  double dropout_head = 0.75;  // drop probability on the pooled vector
  double init_std = 0.02;
  double layer_norm_eps = 1e-12;

  std::size_t head_dim() const { return d_model / n_heads; }

  /// Throws ConfigError on zero sizes, d_model not divisible by n_heads,
  /// max_len above 512, or dropout outside [0, 1).
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// One encoder block. Biases and layer-norm vectors are stored as 1 x n
/// matrices so every parameter is a Matrix.
struct LayerParams {
  Matrix query_weight, query_bias;
  Matrix key_weight, key_bias;
  Matrix value_weight, value_bias;
  Matrix output_weight, output_bias;
  Matrix attention_norm_scale, attention_norm_shift;
  Matrix ffn_in_weight, ffn_in_bias;
  Matrix ffn_out_weight, ffn_out_bias;
  Matrix ffn_norm_scale, ffn_norm_shift;
};

struct ModelParams {
  Matrix token_embedding;     // vocab x d_model, shared with the MLM output
  Matrix position_embedding;  // max_len x d_model
  Matrix segment_embedding;   // 2 x d_model
  std::vector<LayerParams> layers;
  Matrix head_weight;  // n_labels x d_model
  Matrix head_bias;    // 1 x n_labels
  Matrix mlm_bias;     // 1 x vocab
  Matrix nsp_weight;   // 2 x d_model
  Matrix nsp_bias;     // 1 x 2

  /// Normal(0, init_std) weights, zero biases, unit layer-norm scales.
  static ModelParams initialize(const ModelConfig& config, Rng& rng);
  static ModelParams zeros(const ModelConfig& config);

  void set_zero();
  bool all_finite() const;
  std::size_t parameter_count() const;

  /// Visits every tensor as (name, matrix) in checkpoint order.
  template <class F>
  void for_each(F&& visit) {
    visit_all(*this, visit);
  }
  template <class F>
  void for_each(F&& visit) const {
    visit_all(*this, visit);
  }

 private:
  template <class Self, class F>
  static void visit_all(Self& self, F& visit) {
    visit(std::string("embeddings.token"), self.token_embedding);
    visit(std::string("embeddings.position"), self.position_embedding);
    visit(std::string("embeddings.segment"), self.segment_embedding);
    for (std::size_t i = 0; i < self.layers.size(); ++i) {
      auto& layer = self.layers[i];
      const std::string prefix = "layers." + std::to_string(i) + ".";
      visit(prefix + "attention.query.weight", layer.query_weight);
      visit(prefix + "attention.query.bias", layer.query_bias);
      visit(prefix + "attention.key.weight", layer.key_weight);
      visit(prefix + "attention.key.bias", layer.key_bias);
      visit(prefix + "attention.value.weight", layer.value_weight);
      visit(prefix + "attention.value.bias", layer.value_bias);
      visit(prefix + "attention.output.weight", layer.output_weight);
      visit(prefix + "attention.output.bias", layer.output_bias);
      visit(prefix + "attention.norm.scale", layer.attention_norm_scale);
      visit(prefix + "attention.norm.shift", layer.attention_norm_shift);
      visit(prefix + "ffn.in.weight", layer.ffn_in_weight);
      visit(prefix + "ffn.in.bias", layer.ffn_in_bias);
      visit(prefix + "ffn.out.weight", layer.ffn_out_weight);
      visit(prefix + "ffn.out.bias", layer.ffn_out_bias);
      visit(prefix + "ffn.norm.scale", layer.ffn_norm_scale);
      visit(prefix + "ffn.norm.shift", layer.ffn_norm_shift);
    }
    visit(std::string("head.weight"), self.head_weight);
    visit(std::string("head.bias"), self.head_bias);
    visit(std::string("mlm.bias"), self.mlm_bias);
    visit(std::string("nsp.weight"), self.nsp_weight);
    visit(std::string("nsp.bias"), self.nsp_bias);
  }
};

/// Replaces the classification head with a freshly initialized one of
/// `n_labels` rows and updates `config.n_labels`.
void reset_classification_head(ModelParams& params, ModelConfig& config, std::size_t n_labels,
                               Rng& rng);

/// Activations kept for the backward pass of one encoder block.
struct LayerTrace {
  Matrix input;
  Matrix query, key, value;
  std::vector<Matrix> attention;  // per head, rows = queries
  Matrix context;                 // concatenated head outputs
  Matrix attention_normalized;    // pre-scale layer-norm output
  Vector attention_inv_std;
  Matrix attention_out;  // block-internal hidden state after the first norm
  Matrix ffn_pre;        // before GELU
  Matrix ffn_act;
  Matrix ffn_normalized;
  Vector ffn_inv_std;
  Matrix output;
};

struct ForwardTrace {
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<int> attention_mask;
  std::vector<LayerTrace> layers;
  Matrix hidden;             // final hidden states, max_len x d_model
  RowVector pooled;          // C: hidden state at position 0
  RowVector dropout_scale;   // 0 or 1/(1-p) per dimension; ones at inference
  RowVector pooled_dropped;  // input to the classification head
  RowVector logits;
  RowVector probabilities;   // P
};

RowVector softmax(const RowVector& scores);

/// Row-wise softmax(QK^T / sqrt(d_k)) with masked keys at exactly zero
/// weight. Throws PreconditionError when every key is masked and
/// ShapeError on mismatched shapes.
Matrix attention_weights(const Matrix& query, const Matrix& key, std::span<const int> key_mask);

Matrix scaled_dot_attention(const Matrix& query, const Matrix& key, const Matrix& value,
                            std::span<const int> key_mask);

/// Projects `input` to per-head queries/keys/values, attends, concatenates
/// the heads and applies the output projection. Shape is preserved.
Matrix multi_head_attention(const Matrix& input, const LayerParams& layer,
                            std::span<const int> key_mask, std::size_t n_heads);

/// Full forward pass. Dropout on the pooled vector is applied only when
/// `train_mode` is set, drawing from `rng` (required in that case).
/// Throws NumericError naming the layer on non-finite activations.
ForwardTrace encoder_forward(const EncodedSequence& sequence, const ModelParams& params,
                             const ModelConfig& config, bool train_mode, Rng* rng = nullptr);

/// softmax(C W^T + b).
RowVector classify(const RowVector& pooled, const Matrix& weight, const RowVector& bias);

double gelu(double x);
double gelu_derivative(double x);

}  // namespace causalemo
