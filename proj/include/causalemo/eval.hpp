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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "causalemo/emotion.hpp"

namespace causalemo {

/// K x K counts, rows = gold, columns = predicted.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> label_names);

  /// Anger, Joy, Neutral, Sadness.
  static ConfusionMatrix for_evaluation_labels();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& label_names() const { return names_; }

  std::size_t at(std::size_t gold, std::size_t predicted) const {
    return counts_[gold * names_.size() + predicted];
  }
  std::size_t& at(std::size_t gold, std::size_t predicted) {
    return counts_[gold * names_.size() + predicted];
  }

  std::size_t total() const;
  std::size_t row_sum(std::size_t gold) const;
  std::size_t column_sum(std::size_t predicted) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::size_t> counts_;
};

/// Index-based counting. Throws ValidationError on a length mismatch or an
/// index outside [0, K).
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> gold,
                          std::vector<std::string> label_names);

/// Label-based counting over the evaluation labels. Throws ValidationError
/// on a length mismatch or a label outside the evaluation set.
ConfusionMatrix confusion(std::span<const EmotionLabel> predicted,
                          std::span<const EmotionLabel> gold);

struct ClassScores {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::vector<ClassScores> classes;
  ClassScores micro;
  ClassScores macro;
  ClassScores weighted;
  std::size_t total = 0;
};

/// Per-class P = diag / column, R = diag / row, F1 = 2PR / (P + R); any
/// zero denominator scores 0. Macro averages are unweighted means, weighted
/// averages are support-weighted.
EvalReport report(const ConfusionMatrix& matrix);

/// Aligned table with precision / recall / f1-score / support columns and
/// Micro / Macro / Weighted AVG rows.
std::string format_report(const EvalReport& report, int decimals = 3);
nlohmann::json report_to_json(const EvalReport& report);

// ---------------------------------------------------------------------------
// Bag-of-words + logistic regression baseline

/// Lowercased alphanumeric runs; apostrophes stay inside words.
std::vector<std::string> bow_tokens(std::string_view text);

using SparseVector = std::vector<std::pair<int, double>>;  // sorted by index

class BowVocabulary {
 public:
  /// Most frequent `cap` tokens of `texts`, ties broken lexicographically.
  static BowVocabulary fit(std::span<const std::string> texts, std::size_t cap);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<int> find(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

/// Token counts over the vocabulary; unknown tokens are ignored.
SparseVector bow_featurize(std::string_view text, const BowVocabulary& vocab);
std::vector<SparseVector> bow_featurize(std::span<const std::string> texts,
                                        const BowVocabulary& vocab);

struct LogRegOptions {
  double l2 = 1e-4;
  std::size_t iterations = 300;
  double learning_rate = 0.0;  // 0: inverse of the curvature bound
  double momentum = 0.9;
};

class LogisticRegression {
 public:
  LogisticRegression(std::size_t n_features, std::size_t n_classes);

  std::size_t n_features() const { return static_cast<std::size_t>(weights_.size()) / n_classes_; }
  std::size_t n_classes() const { return n_classes_; }

  std::vector<double> scores(const SparseVector& x) const;
  std::vector<double> probabilities(const SparseVector& x) const;
  int predict(const SparseVector& x) const;

  std::vector<double>& weights() { return weights_; }  // class-major
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

 private:
  std::size_t n_classes_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

/// Full-batch gradient descent with heavy-ball momentum on mean
/// cross-entropy + (l2 / 2) * ||W||^2. Throws PreconditionError when fewer
/// than two classes are present and NumericError on divergence.
LogisticRegression train_logreg(std::span<const SparseVector> features,
                                std::span<const int> labels, std::size_t n_classes,
                                std::size_t n_features, const LogRegOptions& options = {});

}  // namespace causalemo
