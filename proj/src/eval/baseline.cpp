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
#include <cctype>
#include <cmath>
#include <map>

#include "causalemo/errors.hpp"
#include "causalemo/eval.hpp"

namespace causalemo {

std::vector<std::string> bow_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80 || std::isalnum(c) || (c == '\'' && !current.empty())) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

BowVocabulary BowVocabulary::fit(std::span<const std::string> texts, std::size_t cap) {
  std::map<std::string, std::size_t> counts;
  for (const auto& text : texts) {
    for (auto& token : bow_tokens(text)) ++counts[token];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > cap) ranked.resize(cap);

  BowVocabulary vocab;
  for (auto& [token, count] : ranked) {
    vocab.index_.emplace(token, static_cast<int>(vocab.tokens_.size()));
    vocab.tokens_.push_back(token);
  }
  return vocab;
}

std::optional<int> BowVocabulary::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector bow_featurize(std::string_view text, const BowVocabulary& vocab) {
  std::map<int, double> counts;
  for (const auto& token : bow_tokens(text)) {
    if (auto id = vocab.find(token)) counts[*id] += 1.0;
  }
  return SparseVector(counts.begin(), counts.end());
}

std::vector<SparseVector> bow_featurize(std::span<const std::string> texts,
                                        const BowVocabulary& vocab) {
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(bow_featurize(text, vocab));
  return out;
}

LogisticRegression::LogisticRegression(std::size_t n_features, std::size_t n_classes)
    : n_classes_(n_classes), weights_(n_features * n_classes, 0.0), bias_(n_classes, 0.0) {}

std::vector<double> LogisticRegression::scores(const SparseVector& x) const {
  const std::size_t f = n_features();
  std::vector<double> out = bias_;
  for (std::size_t k = 0; k < n_classes_; ++k) {
    for (const auto& [index, value] : x) {
      out[k] += weights_[k * f + static_cast<std::size_t>(index)] * value;
    }
  }
  return out;
}

std::vector<double> LogisticRegression::probabilities(const SparseVector& x) const {
  std::vector<double> s = scores(x);
  const double top = *std::max_element(s.begin(), s.end());
  double total = 0.0;
  for (double& v : s) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : s) v /= total;
  return s;
}

int LogisticRegression::predict(const SparseVector& x) const {
  const auto s = scores(x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

LogisticRegression train_logreg(std::span<const SparseVector> features,
                                std::span<const int> labels, std::size_t n_classes,
                                std::size_t n_features, const LogRegOptions& options) {
  if (features.size() != labels.size()) {
    throw ValidationError("feature and label counts differ");
  }
  if (features.empty()) throw PreconditionError("logistic regression needs training data");
  std::vector<bool> present(n_classes, false);
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes) {
      throw ValidationError("label " + std::to_string(y) + " outside [0, n_classes)");
    }
    present[static_cast<std::size_t>(y)] = true;
  }
  if (std::count(present.begin(), present.end(), true) < 2) {
    throw PreconditionError("logistic regression needs at least two classes present");
  }

  const double n = static_cast<double>(features.size());
  // Softmax cross-entropy has curvature at most 1/2 per unit feature norm;
  // the step defaults to the inverse of that bound.
  double mean_sq_norm = 0.0;
  for (const auto& x : features) {
    for (const auto& [index, value] : x) {
      if (index < 0 || static_cast<std::size_t>(index) >= n_features) {
        throw ValidationError("feature index outside [0, n_features)");
      }
      mean_sq_norm += value * value;
    }
  }
  mean_sq_norm /= n;
  const double step = options.learning_rate > 0.0
                          ? options.learning_rate
                          : 1.0 / (0.5 * (mean_sq_norm + 1.0) + options.l2);

  LogisticRegression model(n_features, n_classes);
  std::vector<double> grad_w(model.weights().size());
  std::vector<double> grad_b(n_classes);
  std::vector<double> velocity_w(model.weights().size(), 0.0);
  std::vector<double> velocity_b(n_classes, 0.0);
  for (std::size_t iter = 0; iter < options.iterations; ++iter) {
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    for (std::size_t j = 0; j < grad_w.size(); ++j) grad_w[j] = options.l2 * model.weights()[j];
    for (std::size_t i = 0; i < features.size(); ++i) {
      auto residual = model.probabilities(features[i]);
      residual[static_cast<std::size_t>(labels[i])] -= 1.0;
      for (std::size_t k = 0; k < n_classes; ++k) {
        const double r = residual[k] / n;
        grad_b[k] += r;
        for (const auto& [index, value] : features[i]) {
          grad_w[k * n_features + static_cast<std::size_t>(index)] += r * value;
        }
      }
    }
    for (std::size_t j = 0; j < grad_w.size(); ++j) {
      velocity_w[j] = options.momentum * velocity_w[j] - step * grad_w[j];
      model.weights()[j] += velocity_w[j];
    }
    for (std::size_t k = 0; k < n_classes; ++k) {
      velocity_b[k] = options.momentum * velocity_b[k] - step * grad_b[k];
      model.bias()[k] += velocity_b[k];
    }
    if (!std::all_of(model.weights().begin(), model.weights().end(),
                     [](double w) { return std::isfinite(w); })) {
      throw NumericError("logistic regression diverged at iteration " + std::to_string(iter));
    }
  }
  return model;
}

}  // namespace causalemo
