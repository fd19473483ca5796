#include "convoscope/topics/evaluation.hpp"

#include <algorithm>

#include "convoscope/common/errors.hpp"

namespace convoscope {
namespace {

std::optional<double> ratio(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return std::nullopt;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

ClassificationMetrics metrics_from_counts(const ConfusionCounts& counts) {
  ClassificationMetrics m;
  m.counts = counts;
  m.precision = ratio(counts.true_positive, counts.true_positive + counts.false_positive);
  m.recall = ratio(counts.true_positive, counts.true_positive + counts.false_negative);
  m.f1 = ratio(2 * counts.true_positive, 2 * counts.true_positive + counts.false_positive + counts.false_negative);
  return m;
}

EvaluationReport evaluate_predictions(std::span<const TopicTargets> truth, std::span<const TopicTargets> predicted) {
  EvaluationReport report;
  ConfusionCounts pooled;
  std::vector<std::optional<double>> precisions, recalls, f1s;
  std::size_t items = 0;

  for (const auto& expected : truth) {
    auto match = std::find_if(predicted.begin(), predicted.end(),
                              [&](const TopicTargets& p) { return p.topic_id == expected.topic_id; });
    if (match == predicted.end()) continue;
    if (match->targets.size() != expected.targets.size())
      throw InvalidInputError("prediction length mismatch for topic '" + expected.topic_id + "'");
    ConfusionCounts counts;
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < expected.targets.size(); ++i) {
      if (expected.targets[i] < 0 || match->targets[i] < 0) continue;
      ++labeled;
      bool y = expected.targets[i] > 0;
      bool p = match->targets[i] > 0;
      if (y && p) ++counts.true_positive;
      if (!y && p) ++counts.false_positive;
      if (y && !p) ++counts.false_negative;
      if (!y && !p) ++counts.true_negative;
    }
    if (labeled == 0) continue;
    items = std::max(items, labeled);
    auto metrics = metrics_from_counts(counts);
    precisions.push_back(metrics.precision);
    recalls.push_back(metrics.recall);
    f1s.push_back(metrics.f1);
    pooled.true_positive += counts.true_positive;
    pooled.false_positive += counts.false_positive;
    pooled.false_negative += counts.false_negative;
    pooled.true_negative += counts.true_negative;
    report.per_topic[expected.topic_id] = metrics;
  }
  if (report.per_topic.empty()) throw InvalidInputError("evaluation set is empty");
  report.micro = metrics_from_counts(pooled);
  report.macro = {mean_defined(precisions), mean_defined(recalls), mean_defined(f1s)};
  report.n_items = items;
  return report;
}

EvaluationReport evaluate(const TopicClassifier& classifier, std::span<const SparseVector> features,
                          std::span<const TopicTargets> truth) {
  if (features.empty()) throw InvalidInputError("evaluation set is empty");
  std::vector<TopicTargets> predicted;
  for (const auto& topic : classifier.topics) {
    TopicTargets decisions{topic.topic_id, {}};
    decisions.targets.reserve(features.size());
    for (const auto& row : features) {
      if (row.dimension != classifier.dimension) throw FeatureMismatchError("feature dimension mismatch");
      decisions.targets.push_back(sigmoid(row.dot(topic.weights) + topic.bias) >= classifier.threshold ? 1 : 0);
    }
    predicted.push_back(std::move(decisions));
  }
  return evaluate_predictions(truth, predicted);
}

}  // namespace convoscope
