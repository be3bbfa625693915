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

#include <cmath>

#include "causalemo/encoder.hpp"
#include "causalemo/errors.hpp"
#include "encoder/blocks.hpp"

namespace causalemo {

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_derivative(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * M_SQRT1_2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return cdf + x * pdf;
}

namespace detail {

Matrix layer_norm(const Matrix& input, const Matrix& scale, const Matrix& shift, double eps,
                  Matrix& normalized, Vector& inv_std) {
  const Eigen::Index n = input.cols();
  normalized.resize(input.rows(), n);
  inv_std.resize(input.rows());
  for (Eigen::Index r = 0; r < input.rows(); ++r) {
    const double mean = input.row(r).mean();
    const RowVector centered = input.row(r).array() - mean;
    const double variance = centered.squaredNorm() / static_cast<double>(n);
    inv_std(r) = 1.0 / std::sqrt(variance + eps);
    normalized.row(r) = centered * inv_std(r);
  }
  Matrix out = normalized.array().rowwise() * scale.row(0).array();
  out.rowwise() += shift.row(0);
  return out;
}

Matrix layer_norm_backward(const Matrix& grad_out, const Matrix& normalized,
                           const Vector& inv_std, const Matrix& scale, Matrix& grad_scale,
                           Matrix& grad_shift) {
  grad_scale.row(0) += (grad_out.array() * normalized.array()).colwise().sum().matrix();
  grad_shift.row(0) += grad_out.colwise().sum();
  const Matrix grad_normalized = grad_out.array().rowwise() * scale.row(0).array();
  const double n = static_cast<double>(normalized.cols());
  Matrix grad_input(grad_out.rows(), grad_out.cols());
  for (Eigen::Index r = 0; r < grad_out.rows(); ++r) {
    const double mean_grad = grad_normalized.row(r).sum() / n;
    const double mean_proj = grad_normalized.row(r).dot(normalized.row(r)) / n;
    grad_input.row(r) = inv_std(r) * (grad_normalized.row(r).array() - mean_grad -
                                      normalized.row(r).array() * mean_proj)
                                         .matrix();
  }
  return grad_input;
}

}  // namespace detail

namespace {

void check_finite(const Matrix& m, const std::string& where) {
  if (!m.allFinite()) throw NumericError("non-finite activation in " + where);
}

}  // namespace

ForwardTrace encoder_forward(const EncodedSequence& sequence, const ModelParams& params,
                             const ModelConfig& config, bool train_mode, Rng* rng) {
  const std::size_t len = sequence.ids.size();
  if (len != config.max_len || sequence.segments.size() != len ||
      sequence.attention_mask.size() != len) {
    throw ShapeError("encoded sequence length " + std::to_string(len) +
                     " does not match max_len " + std::to_string(config.max_len));
  }
  if (params.layers.size() != config.n_layers) {
    throw ShapeError("parameter layer count does not match config");
  }

  ForwardTrace trace;
  trace.ids = sequence.ids;
  trace.segments = sequence.segments;
  trace.attention_mask = sequence.attention_mask;

  const auto d = static_cast<Eigen::Index>(config.d_model);
  Matrix x(static_cast<Eigen::Index>(len), d);
  for (std::size_t i = 0; i < len; ++i) {
    const int id = sequence.ids[i];
    const int segment = sequence.segments[i];
    if (id < 0 || id >= params.token_embedding.rows()) {
      throw ShapeError("token id " + std::to_string(id) + " outside the vocabulary");
    }
    if (segment < 0 || segment > 1) throw ShapeError("segment id must be 0 or 1");
    const auto row = static_cast<Eigen::Index>(i);
    x.row(row) = params.token_embedding.row(id) + params.position_embedding.row(row) +
                 params.segment_embedding.row(segment);
  }
  check_finite(x, "embeddings");

  trace.layers.resize(config.n_layers);
  for (std::size_t l = 0; l < config.n_layers; ++l) {
    const LayerParams& layer = params.layers[l];
    LayerTrace& t = trace.layers[l];
    t.input = x;

    const Matrix attended =
        detail::attention_block(x, layer, sequence.attention_mask, config.n_heads, &t);
    t.attention_out = detail::layer_norm(x + attended, layer.attention_norm_scale,
                                         layer.attention_norm_shift, config.layer_norm_eps,
                                         t.attention_normalized, t.attention_inv_std);

    t.ffn_pre = t.attention_out * layer.ffn_in_weight;
    t.ffn_pre.rowwise() += layer.ffn_in_bias.row(0);
    t.ffn_act = t.ffn_pre.unaryExpr([](double v) { return gelu(v); });
    Matrix ffn = t.ffn_act * layer.ffn_out_weight;
    ffn.rowwise() += layer.ffn_out_bias.row(0);

    t.output = detail::layer_norm(t.attention_out + ffn, layer.ffn_norm_scale,
                                  layer.ffn_norm_shift, config.layer_norm_eps, t.ffn_normalized,
                                  t.ffn_inv_std);
    check_finite(t.output, "layer " + std::to_string(l));
    x = t.output;
  }

  trace.hidden = std::move(x);
  trace.pooled = trace.hidden.row(0);
  trace.dropout_scale = RowVector::Ones(d);
  if (train_mode && config.dropout_head > 0.0) {
    if (rng == nullptr) throw PreconditionError("training-mode forward needs a generator");
    const double keep_scale = 1.0 / (1.0 - config.dropout_head);
    for (Eigen::Index i = 0; i < d; ++i) {
      trace.dropout_scale(i) = rng->bernoulli(config.dropout_head) ? 0.0 : keep_scale;
    }
  }
  trace.pooled_dropped = trace.pooled.cwiseProduct(trace.dropout_scale);
  trace.logits = trace.pooled_dropped * params.head_weight.transpose() + params.head_bias.row(0);
  trace.probabilities = softmax(trace.logits);
  return trace;
}

RowVector classify(const RowVector& pooled, const Matrix& weight, const RowVector& bias) {
  if (weight.cols() != pooled.size() || weight.rows() != bias.size()) {
    throw ShapeError("classification head shape does not match pooled vector");
  }
  return softmax(pooled * weight.transpose() + bias);
}

}  // namespace causalemo
