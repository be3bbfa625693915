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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causalemo/corpus.hpp"
#include "causalemo/encoder.hpp"
#include "causalemo/tokenizer.hpp"

namespace causalemo {

// ---------------------------------------------------------------------------
// Losses

/// w_c = min_count / count_c. Throws PreconditionError on a zero count or
/// an empty map.
using ClassWeights = std::map<EmotionLabel, double>;
ClassWeights class_weights(const std::map<EmotionLabel, std::size_t>& counts);

/// Weights laid out by class index in kEvaluationLabels order.
std::vector<double> evaluation_weight_vector(const ClassWeights& weights);

/// Class weights over the four evaluation labels only; other labels in
/// `counts` are ignored.
std::vector<double> evaluation_class_weights(const LabelDistribution& counts);

/// Probabilities below this are floored inside logarithms.
inline constexpr double kProbabilityFloor = 1e-12;

/// Mean of -log P[i, gold[i]]. `floored`, when given, is incremented once per
/// probability that hit kProbabilityFloor.
double nll_loss(const Matrix& probabilities, std::span<const int> gold,
                std::size_t* floored = nullptr);

/// -(1 / sum_i w[gold_i]) * sum_i log(w[gold_i] * P[i, gold_i]), with the
/// weight inside the logarithm as printed.
double weighted_nll_loss(const Matrix& probabilities, std::span<const int> gold,
                         std::span<const double> weights, std::size_t* floored = nullptr);

/// d loss / d logits for the two losses above (softmax folded in).
Matrix nll_logit_gradient(const Matrix& probabilities, std::span<const int> gold);
Matrix weighted_nll_logit_gradient(const Matrix& probabilities, std::span<const int> gold,
                                   std::span<const double> weights);

// ---------------------------------------------------------------------------
// Backward pass

/// Upstream gradients entering the encoder. Either may be empty.
struct OutputGradients {
  RowVector logits;  // d loss / d classification logits
  Matrix hidden;     // d loss / d final hidden states (max_len x d_model)
};

/// Accumulates exact gradients for every tensor touched by `trace` into
/// `grads`. Throws ShapeError when the upstream shapes disagree with the
/// trace.
void backward(const ForwardTrace& trace, const OutputGradients& upstream,
              const ModelParams& params, const ModelConfig& config, ModelParams& grads);

// ---------------------------------------------------------------------------
// Optimizer

struct TrainConfig {
  std::size_t batch_size = 8;
  double learning_rate = 2.5e-6;
  std::size_t n_epochs = 3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 42;
  bool warm_first_epoch = true;

  void validate() const;
};

struct AdamState {
  ModelParams first_moment;
  ModelParams second_moment;
  std::size_t step = 0;

  static AdamState for_model(const ModelConfig& config);
};

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const TrainConfig& config);

// ---------------------------------------------------------------------------
// Fine-tuning

struct LabeledExample {
  EncodedSequence input;
  int target = 0;  // class index
};

/// Encodes pairs and maps their labels to kEvaluationLabels indices.
/// Pairs whose label is outside the evaluation set are skipped.
std::vector<LabeledExample> make_evaluation_examples(std::span<const CausalPair> pairs,
                                                     const Vocab& vocab, std::size_t max_len,
                                                     bool lowercase);

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  bool weighted = false;
  double train_accuracy = 0.0;
  std::optional<double> val_micro_f1;
  std::optional<double> val_macro_f1;
};

struct TrainResult {
  ModelParams best_params;
  ModelParams final_params;
  std::size_t best_epoch = 0;
  std::vector<EpochMetrics> history;
};

using EpochCallback = std::function<void(const EpochMetrics&)>;

/// Mini-batch Adam on the classification loss. When
/// `config.warm_first_epoch` is set, epoch 1 uses weighted_nll_loss with
/// `weights` (by class index); later epochs use nll_loss. Keeps the
/// parameters of the epoch with the best validation micro-F1 (the last
/// epoch when `val` is empty).
TrainResult train_classifier(const ModelConfig& model_config, ModelParams params,
                             std::span<const LabeledExample> train,
                             std::span<const LabeledExample> val, const TrainConfig& config,
                             std::span<const double> weights = {},
                             const EpochCallback& on_epoch = {});

/// Argmax class per example (inference mode).
std::vector<int> predict_classes(const ModelParams& params, const ModelConfig& config,
                                 std::span<const LabeledExample> examples);
int predict_class(const ModelParams& params, const ModelConfig& config,
                  const EncodedSequence& input);

// ---------------------------------------------------------------------------
// Masked-LM + next-sentence pre-training

struct PretrainConfig {
  TrainConfig optimizer;
  MaskingOptions masking;
  std::size_t examples_per_epoch = 0;  // 0: one per consecutive pair
  bool lowercase = true;
};

struct PretrainLosses {
  double mlm = 0.0;
  double nsp = 0.0;
  double total() const { return mlm + nsp; }
};

struct PretrainExample {
  MLMExample masked;
  bool is_next = false;
};

/// Draws NSP pairs and masks them.
std::vector<PretrainExample> make_pretrain_examples(std::span<const Scene> scenes,
                                                    std::size_t n, const Vocab& vocab,
                                                    std::size_t max_len, bool lowercase,
                                                    const MaskingOptions& masking, Rng& rng);

/// Mean masked-token cross-entropy plus mean NSP cross-entropy over a batch.
/// When `grads` is given the exact gradient of that sum is accumulated.
PretrainLosses pretrain_batch_loss(const ModelParams& params, const ModelConfig& config,
                                   std::span<const PretrainExample> batch,
                                   ModelParams* grads = nullptr);

struct PretrainResult {
  ModelParams params;
  std::vector<PretrainLosses> epoch_losses;
};

/// Static masking: the example set is drawn once from `rng`, then trained
/// for config.optimizer.n_epochs. Requires at least two scenes.
PretrainResult pretrain_mlm_nsp(const ModelConfig& model_config, ModelParams params,
                                std::span<const Scene> scenes, const Vocab& vocab,
                                const PretrainConfig& config, Rng& rng);

// ---------------------------------------------------------------------------
// Emotion-hashtag pre-training

enum class TweetEmotion {
  anger,
  anticipation,
  disgust,
  fear,
  joy,
  sadness,
  surprise,
  trust,
};

inline constexpr std::size_t kTweetEmotionCount = 8;

std::string_view to_string(TweetEmotion emotion) noexcept;

/// Label for a recognized emotion hashtag ("#mad" -> anger), case-insensitive.
std::optional<TweetEmotion> hashtag_emotion(std::string_view hashtag) noexcept;

struct TweetCandidate {
  std::string text;
  std::vector<std::string> hashtags;
};

struct TweetRecord {
  std::string text;  // label hashtag stripped
  std::vector<std::string> hashtags;
  TweetEmotion label = TweetEmotion::joy;
};

/// Tab-separated text and space-separated hashtags, one tweet per line.
std::vector<TweetCandidate> read_tweet_file(std::istream& in);

/// Drops exact-text duplicates (first kept) and tweets whose final token is
/// not a recognized emotion hashtag; strips that hashtag from the text.
/// Tweets with nothing left after stripping are dropped too.
std::vector<TweetRecord> filter_tweets(std::span<const TweetCandidate> raw);

/// Each tweet as sentence A with a [None] context, target = label index.
std::vector<LabeledExample> make_tweet_examples(std::span<const TweetRecord> tweets,
                                                const Vocab& vocab, std::size_t max_len,
                                                bool lowercase);

struct HashtagPretrainResult {
  ModelParams params;           // encoder trained, head re-initialized
  ModelParams tweet_params;     // encoder and 8-way head as trained
  std::vector<EpochMetrics> history;
};

/// Single-sentence 8-way fine-tuning on tweets (context slot [None]), then
/// a fresh head with `final_labels` outputs. Throws PreconditionError on
/// an empty tweet list.
HashtagPretrainResult pretrain_emotion_hashtags(ModelConfig& model_config, ModelParams params,
                                      std::span<const TweetRecord> tweets, const Vocab& vocab,
                                      const TrainConfig& config, bool lowercase,
                                      std::size_t final_labels = 4,
                                      const EpochCallback& on_epoch = {});

}  // namespace causalemo
