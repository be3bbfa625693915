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
#include <limits>

#include "causalemo/encoder.hpp"
#include "causalemo/errors.hpp"
#include "encoder/blocks.hpp"

namespace causalemo {

RowVector softmax(const RowVector& scores) {
  const double top = scores.maxCoeff();
  RowVector out = (scores.array() - top).exp().matrix();
  return out / out.sum();
}

Matrix attention_weights(const Matrix& query, const Matrix& key, std::span<const int> key_mask) {
  if (query.cols() != key.cols()) {
    throw ShapeError("query and key widths differ");
  }
  if (key_mask.size() != static_cast<std::size_t>(key.rows())) {
    throw ShapeError("key mask length does not match key count");
  }
  bool any_visible = false;
  for (int m : key_mask) any_visible = any_visible || m != 0;
  if (!any_visible) throw PreconditionError("every key is masked");

  const double scale = 1.0 / std::sqrt(static_cast<double>(query.cols()));
  Matrix weights = (query * key.transpose()) * scale;
  for (Eigen::Index r = 0; r < weights.rows(); ++r) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < weights.cols(); ++c) {
      if (key_mask[static_cast<std::size_t>(c)] != 0) top = std::max(top, weights(r, c));
    }
    double total = 0.0;
    for (Eigen::Index c = 0; c < weights.cols(); ++c) {
      if (key_mask[static_cast<std::size_t>(c)] != 0) {
        weights(r, c) = std::exp(weights(r, c) - top);
        total += weights(r, c);
      } else {
        weights(r, c) = 0.0;
      }
    }
    weights.row(r) /= total;
  }
  return weights;
}

Matrix scaled_dot_attention(const Matrix& query, const Matrix& key, const Matrix& value,
                            std::span<const int> key_mask) {
  if (key.rows() != value.rows()) throw ShapeError("key and value counts differ");
  return attention_weights(query, key, key_mask) * value;
}

namespace detail {

Matrix attention_block(const Matrix& input, const LayerParams& layer,
                       std::span<const int> key_mask, std::size_t n_heads, LayerTrace* trace) {
  const Eigen::Index d = input.cols();
  if (layer.query_weight.rows() != d || layer.query_weight.cols() != d ||
      layer.output_weight.rows() != d) {
    throw ShapeError("attention projections do not match input width " + std::to_string(d));
  }
  if (n_heads == 0 || d % static_cast<Eigen::Index>(n_heads) != 0) {
    throw ShapeError("input width is not divisible by the head count");
  }
  const Eigen::Index head_dim = d / static_cast<Eigen::Index>(n_heads);

  Matrix query = input * layer.query_weight;
  query.rowwise() += layer.query_bias.row(0);
  Matrix key = input * layer.key_weight;
  key.rowwise() += layer.key_bias.row(0);
  Matrix value = input * layer.value_weight;
  value.rowwise() += layer.value_bias.row(0);

  Matrix context(input.rows(), d);
  std::vector<Matrix> heads;
  heads.reserve(n_heads);
  for (std::size_t h = 0; h < n_heads; ++h) {
    const Eigen::Index col = static_cast<Eigen::Index>(h) * head_dim;
    Matrix weights = attention_weights(query.middleCols(col, head_dim),
                                       key.middleCols(col, head_dim), key_mask);
    context.middleCols(col, head_dim) = weights * value.middleCols(col, head_dim);
    heads.push_back(std::move(weights));
  }
  Matrix out = context * layer.output_weight;
  out.rowwise() += layer.output_bias.row(0);

  if (trace != nullptr) {
    trace->query = std::move(query);
    trace->key = std::move(key);
    trace->value = std::move(value);
    trace->attention = std::move(heads);
    trace->context = std::move(context);
  }
  return out;
}

}  // namespace detail

Matrix multi_head_attention(const Matrix& input, const LayerParams& layer,
                            std::span<const int> key_mask, std::size_t n_heads) {
  return detail::attention_block(input, layer, key_mask, n_heads, nullptr);
}

}  // namespace causalemo
