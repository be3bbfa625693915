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

#include "causalemo/errors.hpp"
#include "causalemo/train.hpp"
#include "encoder/blocks.hpp"

namespace causalemo {

void backward(const ForwardTrace& trace, const OutputGradients& upstream,
              const ModelParams& params, const ModelConfig& config, ModelParams& grads) {
  const auto len = static_cast<Eigen::Index>(trace.ids.size());
  const auto d = static_cast<Eigen::Index>(config.d_model);
  if (trace.layers.size() != config.n_layers || trace.hidden.rows() != len ||
      trace.hidden.cols() != d) {
    throw ShapeError("forward trace does not match the model config");
  }
  if (upstream.logits.size() != 0 && upstream.logits.size() != params.head_weight.rows()) {
    throw ShapeError("logit gradient has " + std::to_string(upstream.logits.size()) +
                     " entries, head has " + std::to_string(params.head_weight.rows()));
  }
  if (upstream.hidden.size() != 0 &&
      (upstream.hidden.rows() != len || upstream.hidden.cols() != d)) {
    throw ShapeError("hidden-state gradient shape does not match the trace");
  }

  Matrix grad_hidden = upstream.hidden.size() != 0 ? upstream.hidden : Matrix::Zero(len, d);
  if (upstream.logits.size() != 0) {
    grads.head_weight += upstream.logits.transpose() * trace.pooled_dropped;
    grads.head_bias.row(0) += upstream.logits;
    const RowVector grad_pooled =
        (upstream.logits * params.head_weight).cwiseProduct(trace.dropout_scale);
    grad_hidden.row(0) += grad_pooled;
  }

  const auto head_dim = static_cast<Eigen::Index>(config.head_dim());
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  for (std::size_t l = config.n_layers; l-- > 0;) {
    const LayerParams& layer = params.layers[l];
    const LayerTrace& t = trace.layers[l];
    LayerParams& g = grads.layers[l];

    // output = norm(attention_out + ffn(attention_out))
    const Matrix grad_ffn_sum =
        detail::layer_norm_backward(grad_hidden, t.ffn_normalized, t.ffn_inv_std,
                                    layer.ffn_norm_scale, g.ffn_norm_scale, g.ffn_norm_shift);
    g.ffn_out_weight += t.ffn_act.transpose() * grad_ffn_sum;
    g.ffn_out_bias.row(0) += grad_ffn_sum.colwise().sum();
    const Matrix grad_act = grad_ffn_sum * layer.ffn_out_weight.transpose();
    const Matrix grad_pre =
        grad_act.cwiseProduct(t.ffn_pre.unaryExpr([](double v) { return gelu_derivative(v); }));
    g.ffn_in_weight += t.attention_out.transpose() * grad_pre;
    g.ffn_in_bias.row(0) += grad_pre.colwise().sum();
    const Matrix grad_attention_out = grad_ffn_sum + grad_pre * layer.ffn_in_weight.transpose();

    // attention_out = norm(input + attention(input))
    const Matrix grad_attn_sum = detail::layer_norm_backward(
        grad_attention_out, t.attention_normalized, t.attention_inv_std,
        layer.attention_norm_scale, g.attention_norm_scale, g.attention_norm_shift);
    g.output_weight += t.context.transpose() * grad_attn_sum;
    g.output_bias.row(0) += grad_attn_sum.colwise().sum();
    const Matrix grad_context = grad_attn_sum * layer.output_weight.transpose();

    Matrix grad_query(len, d), grad_key(len, d), grad_value(len, d);
    for (std::size_t h = 0; h < config.n_heads; ++h) {
      const Eigen::Index col = static_cast<Eigen::Index>(h) * head_dim;
      const Matrix& weights = t.attention[h];
      const auto grad_out = grad_context.middleCols(col, head_dim);
      grad_value.middleCols(col, head_dim) = weights.transpose() * grad_out;
      const Matrix grad_weights = grad_out * t.value.middleCols(col, head_dim).transpose();
      const Vector row_dot = grad_weights.cwiseProduct(weights).rowwise().sum();
      const Matrix grad_scores =
          weights.cwiseProduct(grad_weights - row_dot.replicate(1, grad_weights.cols())) * scale;
      grad_query.middleCols(col, head_dim) = grad_scores * t.key.middleCols(col, head_dim);
      grad_key.middleCols(col, head_dim) =
          grad_scores.transpose() * t.query.middleCols(col, head_dim);
    }
    g.query_weight += t.input.transpose() * grad_query;
    g.query_bias.row(0) += grad_query.colwise().sum();
    g.key_weight += t.input.transpose() * grad_key;
    g.key_bias.row(0) += grad_key.colwise().sum();
    g.value_weight += t.input.transpose() * grad_value;
    g.value_bias.row(0) += grad_value.colwise().sum();

    grad_hidden = grad_attn_sum + grad_query * layer.query_weight.transpose() +
                  grad_key * layer.key_weight.transpose() +
                  grad_value * layer.value_weight.transpose();
  }

  for (Eigen::Index i = 0; i < len; ++i) {
    const auto row = grad_hidden.row(i);
    grads.token_embedding.row(trace.ids[static_cast<std::size_t>(i)]) += row;
    grads.position_embedding.row(i) += row;
    grads.segment_embedding.row(trace.segments[static_cast<std::size_t>(i)]) += row;
  }
}

}  // namespace causalemo
