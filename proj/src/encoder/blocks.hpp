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

#include <span>

#include "causalemo/encoder.hpp"

namespace causalemo::detail {

/// Multi-head attention sub-layer (no residual, no norm). Fills the
/// attention fields of `trace` when given.
Matrix attention_block(const Matrix& input, const LayerParams& layer,
                       std::span<const int> key_mask, std::size_t n_heads, LayerTrace* trace);

/// Row-wise layer norm. Stores the normalized rows and 1/std per row.
Matrix layer_norm(const Matrix& input, const Matrix& scale, const Matrix& shift, double eps,
                  Matrix& normalized, Vector& inv_std);

/// Gradient of layer_norm w.r.t. its input, accumulating scale/shift
/// gradients.
Matrix layer_norm_backward(const Matrix& grad_out, const Matrix& normalized,
                           const Vector& inv_std, const Matrix& scale, Matrix& grad_scale,
                           Matrix& grad_shift);

}  // namespace causalemo::detail
