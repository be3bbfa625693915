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
#include <iomanip>
#include <sstream>

#include "causalemo/errors.hpp"
#include "causalemo/eval.hpp"

namespace causalemo {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> label_names)
    : names_(std::move(label_names)), counts_(names_.size() * names_.size(), 0) {}

ConfusionMatrix ConfusionMatrix::for_evaluation_labels() {
  std::vector<std::string> names;
  for (EmotionLabel label : kEvaluationLabels) names.emplace_back(display_name(label));
  return ConfusionMatrix(std::move(names));
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (std::size_t c : counts_) n += c;
  return n;
}

std::size_t ConfusionMatrix::row_sum(std::size_t gold) const {
  std::size_t n = 0;
  for (std::size_t p = 0; p < size(); ++p) n += at(gold, p);
  return n;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < size(); ++g) n += at(g, predicted);
  return n;
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> gold,
                          std::vector<std::string> label_names) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("prediction count " + std::to_string(predicted.size()) +
                          " differs from gold count " + std::to_string(gold.size()));
  }
  ConfusionMatrix matrix(std::move(label_names));
  const auto k = static_cast<int>(matrix.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= k || predicted[i] < 0 || predicted[i] >= k) {
      throw ValidationError("label index outside [0, " + std::to_string(k) + ") at example " +
                            std::to_string(i));
    }
    ++matrix.at(static_cast<std::size_t>(gold[i]), static_cast<std::size_t>(predicted[i]));
  }
  return matrix;
}

ConfusionMatrix confusion(std::span<const EmotionLabel> predicted,
                          std::span<const EmotionLabel> gold) {
  if (predicted.size() != gold.size()) {
    throw ValidationError("prediction count " + std::to_string(predicted.size()) +
                          " differs from gold count " + std::to_string(gold.size()));
  }
  const auto to_index = [](EmotionLabel label) {
    const auto index = evaluation_index(label);
    if (!index) {
      throw ValidationError("label " + std::string(to_string(label)) +
                            " is not an evaluation label");
    }
    return *index;
  };
  std::vector<int> p, g;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    p.push_back(to_index(predicted[i]));
    g.push_back(to_index(gold[i]));
  }
  return confusion(p, g, ConfusionMatrix::for_evaluation_labels().label_names());
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

EvalReport report(const ConfusionMatrix& matrix) {
  EvalReport out;
  out.total = matrix.total();
  if (out.total == 0) throw PreconditionError("cannot report on an empty confusion matrix");

  std::size_t correct = 0;
  for (std::size_t k = 0; k < matrix.size(); ++k) {
    ClassScores scores;
    scores.label = matrix.label_names()[k];
    scores.support = matrix.row_sum(k);
    scores.precision = ratio(matrix.at(k, k), matrix.column_sum(k));
    scores.recall = ratio(matrix.at(k, k), scores.support);
    scores.f1 = harmonic(scores.precision, scores.recall);
    correct += matrix.at(k, k);
    out.classes.push_back(std::move(scores));
  }

  // Single-label: micro precision and micro recall both reduce to accuracy.
  out.micro.label = "Micro AVG";
  out.micro.precision = ratio(correct, out.total);
  out.micro.recall = ratio(correct, out.total);
  out.micro.f1 = out.micro.precision;
  out.micro.support = out.total;

  out.macro.label = "Macro AVG";
  out.weighted.label = "Weighted AVG";
  const double k = static_cast<double>(matrix.size());
  const double n = static_cast<double>(out.total);
  for (const auto& c : out.classes) {
    out.macro.precision += c.precision / k;
    out.macro.recall += c.recall / k;
    out.macro.f1 += c.f1 / k;
    const double share = static_cast<double>(c.support) / n;
    out.weighted.precision += share * c.precision;
    out.weighted.recall += share * c.recall;
    out.weighted.f1 += share * c.f1;
  }
  out.macro.support = out.total;
  out.weighted.support = out.total;
  return out;
}

std::string format_report(const EvalReport& report, int decimals) {
  std::size_t label_width = std::string("Weighted AVG").size();
  for (const auto& c : report.classes) label_width = std::max(label_width, c.label.size());
  const int col = std::max(10, decimals + 7);

  std::ostringstream out;
  out << std::setw(static_cast<int>(label_width)) << "" << std::setw(col) << "precision"
      << std::setw(col) << "recall" << std::setw(col) << "f1-score" << std::setw(col)
      << "support" << "\n\n";
  const auto row = [&](const ClassScores& c) {
    out << std::setw(static_cast<int>(label_width)) << c.label << std::fixed
        << std::setprecision(decimals) << std::setw(col) << c.precision << std::setw(col)
        << c.recall << std::setw(col) << c.f1 << std::setw(col) << c.support << '\n';
  };
  for (const auto& c : report.classes) row(c);
  row(report.micro);
  row(report.macro);
  row(report.weighted);
  return out.str();
}

nlohmann::json report_to_json(const EvalReport& report) {
  const auto entry = [](const ClassScores& c) {
    return nlohmann::json{{"label", c.label},
                          {"precision", c.precision},
                          {"recall", c.recall},
                          {"f1", c.f1},
                          {"support", c.support}};
  };
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.classes) classes.push_back(entry(c));
  return {{"classes", classes},
          {"micro", entry(report.micro)},
          {"macro", entry(report.macro)},
          {"weighted", entry(report.weighted)},
          {"total", report.total}};
}

}  // namespace causalemo
