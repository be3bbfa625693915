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
#include "causalemo/eval.hpp"
#include "causalemo/train.hpp"

namespace causalemo {
namespace {

int argmax(const RowVector& v) {
  Eigen::Index best = 0;
  v.maxCoeff(&best);
  return static_cast<int>(best);
}

std::vector<std::string> class_names(std::size_t n_labels) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n_labels; ++k) {
    names.push_back(n_labels == kEvaluationLabels.size()
                        ? std::string(display_name(kEvaluationLabels[k]))
                        : "class_" + std::to_string(k));
  }
  return names;
}

}  // namespace

std::vector<LabeledExample> make_evaluation_examples(std::span<const CausalPair> pairs,
                                                     const Vocab& vocab, std::size_t max_len,
                                                     bool lowercase) {
  std::vector<LabeledExample> out;
  out.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (!pair.label) continue;
    const auto index = evaluation_index(*pair.label);
    if (!index) continue;
    out.push_back({encode_pair(pair, vocab, max_len, lowercase), *index});
  }
  return out;
}

int predict_class(const ModelParams& params, const ModelConfig& config,
                  const EncodedSequence& input) {
  return argmax(encoder_forward(input, params, config, false).probabilities);
}

std::vector<int> predict_classes(const ModelParams& params, const ModelConfig& config,
                                 std::span<const LabeledExample> examples) {
  std::vector<int> out;
  out.reserve(examples.size());
  for (const auto& example : examples) out.push_back(predict_class(params, config, example.input));
  return out;
}

TrainResult train_classifier(const ModelConfig& model_config, ModelParams params,
                             std::span<const LabeledExample> train,
                             std::span<const LabeledExample> val, const TrainConfig& config,
                             std::span<const double> weights, const EpochCallback& on_epoch) {
  config.validate();
  model_config.validate();
  if (train.empty()) throw PreconditionError("training set is empty");
  if (config.warm_first_epoch && weights.size() < model_config.n_labels) {
    throw PreconditionError("first-epoch warming needs one class weight per label");
  }

  Rng rng(config.seed);
  AdamState adam = AdamState::for_model(model_config);
  ModelParams grads = ModelParams::zeros(model_config);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  double best_micro = -1.0;
  for (std::size_t epoch = 1; epoch <= config.n_epochs; ++epoch) {
    const bool weighted = config.warm_first_epoch && epoch == 1;
    rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t n_batches = 0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      std::vector<int> gold;
      for (std::size_t i = start; i < stop; ++i) gold.push_back(train[order[i]].target);
      double normalizer = static_cast<double>(gold.size());
      if (weighted) {
        normalizer = 0.0;
        for (int g : gold) normalizer += weights[static_cast<std::size_t>(g)];
      }

      grads.set_zero();
      Matrix probabilities(static_cast<Eigen::Index>(gold.size()),
                           static_cast<Eigen::Index>(model_config.n_labels));
      for (std::size_t i = start; i < stop; ++i) {
        const LabeledExample& example = train[order[i]];
        const ForwardTrace trace = encoder_forward(example.input, params, model_config, true, &rng);
        const auto row = static_cast<Eigen::Index>(i - start);
        probabilities.row(row) = trace.probabilities;
        if (argmax(trace.probabilities) == example.target) ++correct;

        OutputGradients upstream;
        upstream.logits = trace.probabilities;
        upstream.logits(example.target) -= 1.0;
        upstream.logits /= normalizer;
        backward(trace, upstream, params, model_config, grads);
      }

      const double loss = weighted ? weighted_nll_loss(probabilities, gold, weights)
                                   : nll_loss(probabilities, gold);
      if (!std::isfinite(loss) || !grads.all_finite()) {
        throw NumericError("training diverged in epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(n_batches + 1) + " (loss " + std::to_string(loss) + ")");
      }
      adam_step(params, grads, adam, config);
      loss_sum += loss;
      ++n_batches;
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.weighted = weighted;
    metrics.train_loss = loss_sum / static_cast<double>(n_batches);
    metrics.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    if (!val.empty()) {
      std::vector<int> gold;
      for (const auto& example : val) gold.push_back(example.target);
      const auto predicted = predict_classes(params, model_config, val);
      const EvalReport scores =
          report(confusion(predicted, gold, class_names(model_config.n_labels)));
      metrics.val_micro_f1 = scores.micro.f1;
      metrics.val_macro_f1 = scores.macro.f1;
    }

    const double selection = metrics.val_micro_f1.value_or(static_cast<double>(epoch));
    if (val.empty() || selection > best_micro) {
      best_micro = selection;
      result.best_params = params;
      result.best_epoch = epoch;
    }
    result.history.push_back(metrics);
    if (on_epoch) on_epoch(metrics);
  }
  if (result.best_epoch == 0) result.best_params = params;
  result.final_params = std::move(params);
  return result;
}

}  // namespace causalemo
