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

#include "causalemo/errors.hpp"
#include "causalemo/train.hpp"

namespace causalemo {
namespace {

void check_batch(const Matrix& probabilities, std::span<const int> gold) {
  if (static_cast<std::size_t>(probabilities.rows()) != gold.size()) {
    throw ShapeError("probability rows and gold labels differ in count");
  }
  if (gold.empty()) throw PreconditionError("loss over an empty batch");
  for (int g : gold) {
    if (g < 0 || g >= probabilities.cols()) {
      throw ShapeError("gold label " + std::to_string(g) + " outside the probability row");
    }
  }
}

double floored_log(double p, std::size_t* floored) {
  if (p < kProbabilityFloor) {
    if (floored != nullptr) ++*floored;
    p = kProbabilityFloor;
  }
  return std::log(p);
}

double weight_sum(std::span<const int> gold, std::span<const double> weights) {
  double total = 0.0;
  for (int g : gold) {
    if (static_cast<std::size_t>(g) >= weights.size()) {
      throw PreconditionError("no class weight for label " + std::to_string(g));
    }
    total += weights[static_cast<std::size_t>(g)];
  }
  return total;
}

}  // namespace

ClassWeights class_weights(const std::map<EmotionLabel, std::size_t>& counts) {
  if (counts.empty()) throw PreconditionError("class weights need at least one class");
  std::size_t smallest = counts.begin()->second;
  for (const auto& [label, count] : counts) {
    if (count == 0) {
      throw PreconditionError("class weight undefined: " + std::string(to_string(label)) +
                              " has zero examples");
    }
    smallest = std::min(smallest, count);
  }
  ClassWeights weights;
  for (const auto& [label, count] : counts) {
    weights[label] = static_cast<double>(smallest) / static_cast<double>(count);
  }
  return weights;
}

std::vector<double> evaluation_weight_vector(const ClassWeights& weights) {
  std::vector<double> out;
  for (EmotionLabel label : kEvaluationLabels) {
    auto it = weights.find(label);
    if (it == weights.end()) {
      throw PreconditionError("missing class weight for " + std::string(to_string(label)));
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<double> evaluation_class_weights(const LabelDistribution& counts) {
  LabelDistribution kept;
  for (EmotionLabel label : kEvaluationLabels) {
    auto it = counts.find(label);
    kept[label] = it == counts.end() ? 0 : it->second;
  }
  return evaluation_weight_vector(class_weights(kept));
}

double nll_loss(const Matrix& probabilities, std::span<const int> gold, std::size_t* floored) {
  check_batch(probabilities, gold);
  double total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    total -= floored_log(probabilities(static_cast<Eigen::Index>(i), gold[i]), floored);
  }
  return total / static_cast<double>(gold.size());
}

double weighted_nll_loss(const Matrix& probabilities, std::span<const int> gold,
                         std::span<const double> weights, std::size_t* floored) {
  check_batch(probabilities, gold);
  const double normalizer = weight_sum(gold, weights);
  double total = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const double w = weights[static_cast<std::size_t>(gold[i])];
    total += std::log(w) + floored_log(probabilities(static_cast<Eigen::Index>(i), gold[i]), floored);
  }
  return -total / normalizer;
}

Matrix nll_logit_gradient(const Matrix& probabilities, std::span<const int> gold) {
  check_batch(probabilities, gold);
  Matrix grad = probabilities;
  for (std::size_t i = 0; i < gold.size(); ++i) grad(static_cast<Eigen::Index>(i), gold[i]) -= 1.0;
  return grad / static_cast<double>(gold.size());
}

Matrix weighted_nll_logit_gradient(const Matrix& probabilities, std::span<const int> gold,
                                   std::span<const double> weights) {
  check_batch(probabilities, gold);
  // log(w * p) = log w + log p: the weight only shifts the summand, so each
  // row's gradient is the plain softmax residual over the weight total.
  const double normalizer = weight_sum(gold, weights);
  Matrix grad = probabilities;
  for (std::size_t i = 0; i < gold.size(); ++i) grad(static_cast<Eigen::Index>(i), gold[i]) -= 1.0;
  return grad / normalizer;
}

}  // namespace causalemo
