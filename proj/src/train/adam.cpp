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

#include "causalemo/errors.hpp"
#include "causalemo/train.hpp"

namespace causalemo {
namespace {

template <class Params>
auto tensor_list(Params& params) {
  using Ptr = std::conditional_t<std::is_const_v<Params>, const Matrix*, Matrix*>;
  std::vector<Ptr> out;
  params.for_each([&](const std::string&, auto& tensor) { out.push_back(&tensor); });
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

AdamState AdamState::for_model(const ModelConfig& config) {
  return {ModelParams::zeros(config), ModelParams::zeros(config), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& config) {
  auto p = tensor_list(params);
  auto g = tensor_list(grads);
  auto m = tensor_list(state.first_moment);
  auto v = tensor_list(state.second_moment);
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw ShapeError("Adam state does not match the parameters");
  }

  ++state.step;
  const double step = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, step);
  const double correction2 = 1.0 - std::pow(config.beta2, step);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (g[i]->rows() != p[i]->rows() || g[i]->cols() != p[i]->cols()) {
      throw ShapeError("gradient shape mismatch in Adam step");
    }
    m[i]->array() = config.beta1 * m[i]->array() + (1.0 - config.beta1) * g[i]->array();
    v[i]->array() = config.beta2 * v[i]->array() + (1.0 - config.beta2) * g[i]->array().square();
    p[i]->array() -= config.learning_rate * (m[i]->array() / correction1) /
                     ((v[i]->array() / correction2).sqrt() + config.epsilon);
  }
}

}  // namespace causalemo
