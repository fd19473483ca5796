#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "convoscope/topics/classifier.hpp"

namespace convoscope {

struct ConfusionCounts {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
};

// A metric whose denominator is zero is std::nullopt, never 0.
// F1 uses 2TP / (2TP + FP + FN).
struct ClassificationMetrics {
  ConfusionCounts counts;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

ClassificationMetrics metrics_from_counts(const ConfusionCounts& counts);

struct MacroMetrics {
  // Mean over topics where the metric is defined.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

struct EvaluationReport {
  std::map<std::string, ClassificationMetrics> per_topic;
  ClassificationMetrics micro;  // pooled counts
  MacroMetrics macro;
  std::size_t n_items = 0;
};

// Compares predicted and true targets topic by topic; -1 entries in either
// are ignored. Throws InvalidInputError when nothing is labeled.
EvaluationReport evaluate_predictions(std::span<const TopicTargets> truth, std::span<const TopicTargets> predicted);

// Runs the classifier (threshold decisions) on held-out features and
// evaluates topics present in both the classifier and the labels.
EvaluationReport evaluate(const TopicClassifier& classifier, std::span<const SparseVector> features,
                          std::span<const TopicTargets> truth);

}  // namespace convoscope
