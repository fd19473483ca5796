#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "convoscope/topics/hierarchy.hpp"
#include "convoscope/topics/vectorizer.hpp"

namespace convoscope {

// One-vs-rest L2-regularized logistic regression over bag-of-words counts,
// one binary problem per leaf topic.

struct TrainConfig {
  double l2 = 1e-2;
  double learning_rate = 2.0;
  // Epoch learning rate is learning_rate / (1 + decay * epoch).
  double decay = 0.0;
  std::size_t epochs = 1000;
  std::size_t batch_size = 16;
  std::uint64_t seed = 42;
  double threshold = 0.5;
  // Training stops early once an epoch improves the loss by less than this.
  double tolerance = 1e-9;
};

struct TopicWeights {
  std::string topic_id;
  std::vector<double> weights;
  double bias = 0.0;

  bool operator==(const TopicWeights&) const = default;
};

struct TopicClassifier {
  std::size_t dimension = 0;
  double threshold = 0.5;
  double l2 = 1e-2;
  std::vector<TopicWeights> topics;

  const TopicWeights* find(const std::string& topic_id) const;

  bool operator==(const TopicClassifier&) const = default;
};

// Per-document binary targets for one topic: 1, 0, or -1 when unlabeled.
struct TopicTargets {
  std::string topic_id;
  std::vector<std::int8_t> targets;
};

struct TopicTrainingReport {
  std::string topic_id;
  bool skipped = false;
  bool halted = false;
  std::string diagnostic;
  // Full-batch regularized loss after each accepted epoch; index 0 holds
  // the loss of the zero initialization.
  std::vector<double> epoch_losses;
  std::size_t backtracks = 0;
};

struct TrainingResult {
  TopicClassifier classifier;
  std::vector<TopicTrainingReport> reports;
};

// Mini-batch gradient descent per topic. An epoch that would increase the
// full-batch loss is rolled back and retried with half the learning rate;
// once the rate underflows, training halts with a diagnostic. Topics without
// both a positive and a negative example are skipped. Throws
// DivergenceError on a NaN loss and FeatureMismatchError on a dimension
// mismatch.
TrainingResult train(std::span<const SparseVector> features, std::size_t dimension,
                     std::span<const TopicTargets> labels, const TrainConfig& config = {});

double sigmoid(double z);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

// (sum of logistic losses + (l2 / 2) * |w|^2) / n; the bias is not
// regularized. targets are 0 or 1.
LossAndGradient logistic_loss(std::span<const double> weights, double bias, std::span<const SparseVector> features,
                              std::span<const double> targets, double l2);

struct Prediction {
  std::map<std::string, double> probabilities;  // per leaf topic
  std::set<std::string> present;                // leaves at or above threshold, plus their parents
};

// Throws FeatureMismatchError when the feature dimension differs.
Prediction predict(const TopicClassifier& classifier, const SparseVector& features, const TopicHierarchy& hierarchy);

}  // namespace convoscope
