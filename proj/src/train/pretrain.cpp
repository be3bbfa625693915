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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "causalemo/errors.hpp"
#include "causalemo/train.hpp"

namespace causalemo {

std::vector<PretrainExample> make_pretrain_examples(std::span<const Scene> scenes,
                                                    std::size_t n, const Vocab& vocab,
                                                    std::size_t max_len, bool lowercase,
                                                    const MaskingOptions& masking, Rng& rng) {
  std::vector<PretrainExample> out;
  out.reserve(n);
  for (auto& nsp : sample_nsp_pairs(scenes, n, vocab, max_len, lowercase, rng)) {
    out.push_back({mask_for_mlm(nsp.encoded, vocab, rng, masking), nsp.is_next});
  }
  return out;
}

PretrainLosses pretrain_batch_loss(const ModelParams& params, const ModelConfig& config,
                                   std::span<const PretrainExample> batch, ModelParams* grads) {
  if (batch.empty()) throw PreconditionError("pre-training batch is empty");
  std::size_t n_masked = 0;
  for (const auto& example : batch) n_masked += example.masked.targets.size();

  const double batch_size = static_cast<double>(batch.size());
  double mlm_sum = 0.0;
  double nsp_sum = 0.0;
  for (const auto& example : batch) {
    const ForwardTrace trace = encoder_forward(example.masked.corrupted, params, config, false);

    // Next-sentence head on C; class 1 = "is next".
    const RowVector nsp_logits =
        trace.pooled * params.nsp_weight.transpose() + params.nsp_bias.row(0);
    const RowVector nsp_prob = softmax(nsp_logits);
    const int nsp_gold = example.is_next ? 1 : 0;
    nsp_sum -= std::log(std::max(nsp_prob(nsp_gold), kProbabilityFloor));

    Matrix grad_hidden;
    if (grads != nullptr) grad_hidden = Matrix::Zero(trace.hidden.rows(), trace.hidden.cols());
    if (grads != nullptr) {
      RowVector grad_logits = nsp_prob;
      grad_logits(nsp_gold) -= 1.0;
      grad_logits /= batch_size;
      grads->nsp_weight += grad_logits.transpose() * trace.pooled;
      grads->nsp_bias.row(0) += grad_logits;
      grad_hidden.row(0) += grad_logits * params.nsp_weight;
    }

    // Masked-token head tied to the token embedding table.
    for (const auto& [position, original] : example.masked.targets) {
      const auto row = static_cast<Eigen::Index>(position);
      const RowVector logits =
          trace.hidden.row(row) * params.token_embedding.transpose() + params.mlm_bias.row(0);
      const RowVector prob = softmax(logits);
      mlm_sum -= std::log(std::max(prob(original), kProbabilityFloor));
      if (grads != nullptr) {
        RowVector grad_logits = prob;
        grad_logits(original) -= 1.0;
        grad_logits /= static_cast<double>(n_masked);
        grads->token_embedding += grad_logits.transpose() * trace.hidden.row(row);
        grads->mlm_bias.row(0) += grad_logits;
        grad_hidden.row(row) += grad_logits * params.token_embedding;
      }
    }

    if (grads != nullptr) backward(trace, {RowVector(), grad_hidden}, params, config, *grads);
  }

  PretrainLosses losses;
  losses.mlm = n_masked > 0 ? mlm_sum / static_cast<double>(n_masked) : 0.0;
  losses.nsp = nsp_sum / batch_size;
  return losses;
}

PretrainResult pretrain_mlm_nsp(const ModelConfig& model_config, ModelParams params,
                                std::span<const Scene> scenes, const Vocab& vocab,
                                const PretrainConfig& config, Rng& rng) {
  config.optimizer.validate();
  model_config.validate();
  if (vocab.size() != model_config.vocab_size) {
    throw ConfigError("vocabulary size does not match the model config");
  }
  std::vector<Scene> usable;
  for (const auto& scene : scenes) {
    if (scene.size() >= 2) usable.push_back(scene);
  }
  if (usable.size() < 2) {
    throw PreconditionError("pre-training corpus needs at least two scenes of two utterances");
  }

  std::size_t n = config.examples_per_epoch;
  if (n == 0) {
    for (const auto& scene : usable) n += scene.size() - 1;
  }
  const auto examples = make_pretrain_examples(usable, n, vocab, model_config.max_len,
                                               config.lowercase, config.masking, rng);

  AdamState adam = AdamState::for_model(model_config);
  ModelParams grads = ModelParams::zeros(model_config);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch_size = config.optimizer.batch_size;

  PretrainResult result;
  for (std::size_t epoch = 1; epoch <= config.optimizer.n_epochs; ++epoch) {
    rng.shuffle(order);
    PretrainLosses sum;
    std::size_t n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      std::vector<PretrainExample> batch;
      for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) {
        batch.push_back(examples[order[i]]);
      }
      grads.set_zero();
      const PretrainLosses losses = pretrain_batch_loss(params, model_config, batch, &grads);
      if (!std::isfinite(losses.total()) || !grads.all_finite()) {
        throw NumericError("pre-training diverged in epoch " + std::to_string(epoch));
      }
      adam_step(params, grads, adam, config.optimizer);
      sum.mlm += losses.mlm;
      sum.nsp += losses.nsp;
      ++n_batches;
    }
    sum.mlm /= static_cast<double>(n_batches);
    sum.nsp /= static_cast<double>(n_batches);
    result.epoch_losses.push_back(sum);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace causalemo
