#include "convoscope/topics/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"

namespace convoscope {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double regularized_loss(std::span<const double> weights, double bias, std::span<const SparseVector* const> rows,
                        std::span<const double> targets, double l2) {
  double data = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double z = rows[i]->dot(weights) + bias;
    data += softplus(z) - targets[i] * z;
  }
  double norm = 0.0;
  for (double w : weights) norm += w * w;
  return (data + 0.5 * l2 * norm) / static_cast<double>(rows.size());
}

// One gradient step on the examples in [begin, end) of `order`.
void minibatch_step(std::vector<double>& weights, double& bias, std::span<const SparseVector* const> rows,
                    std::span<const double> targets, std::span<const std::size_t> batch, double l2, double rate) {
  const double l2_per_example = l2 / static_cast<double>(rows.size());
  std::vector<std::pair<std::uint32_t, double>> sparse_grad;
  double bias_grad = 0.0;
  for (std::size_t i : batch) {
    double residual = sigmoid(rows[i]->dot(weights) + bias) - targets[i];
    bias_grad += residual;
    for (const auto& [column, value] : rows[i]->entries) sparse_grad.emplace_back(column, residual * value);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  const double shrink = 1.0 - rate * l2_per_example;
  for (double& w : weights) w *= shrink;
  for (const auto& [column, g] : sparse_grad) weights[column] -= rate * g * inv;
  bias -= rate * bias_grad * inv;
}

void check_dimension(const SparseVector& row, std::size_t dimension) {
  if (row.dimension != dimension)
    throw FeatureMismatchError("feature dimension " + std::to_string(row.dimension) + " does not match " +
                               std::to_string(dimension));
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

const TopicWeights* TopicClassifier::find(const std::string& topic_id) const {
  auto it = std::find_if(topics.begin(), topics.end(), [&](const TopicWeights& t) { return t.topic_id == topic_id; });
  return it == topics.end() ? nullptr : &*it;
}

LossAndGradient logistic_loss(std::span<const double> weights, double bias, std::span<const SparseVector> features,
                              std::span<const double> targets, double l2) {
  if (features.size() != targets.size()) throw InvalidInputError("features and targets differ in length");
  if (features.empty()) throw InvalidInputError("no examples");
  LossAndGradient out;
  out.weight_gradient.assign(weights.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    check_dimension(features[i], weights.size());
    double z = features[i].dot(weights) + bias;
    out.loss += (softplus(z) - targets[i] * z) * inv;
    double residual = (sigmoid(z) - targets[i]) * inv;
    out.bias_gradient += residual;
    for (const auto& [column, value] : features[i].entries) out.weight_gradient[column] += residual * value;
  }
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out.loss += 0.5 * l2 * weights[j] * weights[j] * inv;
    out.weight_gradient[j] += l2 * weights[j] * inv;
  }
  return out;
}

TrainingResult train(std::span<const SparseVector> features, std::size_t dimension,
                     std::span<const TopicTargets> labels, const TrainConfig& config) {
  if (config.batch_size == 0) throw InvalidInputError("batch_size must be positive");
  if (!(config.learning_rate > 0.0)) throw InvalidInputError("learning_rate must be positive");
  for (const auto& row : features) check_dimension(row, dimension);

  TrainingResult result;
  result.classifier.dimension = dimension;
  result.classifier.threshold = config.threshold;
  result.classifier.l2 = config.l2;

  for (std::size_t t = 0; t < labels.size(); ++t) {
    const TopicTargets& topic = labels[t];
    TopicTrainingReport report;
    report.topic_id = topic.topic_id;
    if (topic.targets.size() != features.size())
      throw InvalidInputError("targets for topic '" + topic.topic_id + "' do not match the feature rows");

    std::vector<const SparseVector*> rows;
    std::vector<double> targets;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (topic.targets[i] < 0) continue;
      rows.push_back(&features[i]);
      targets.push_back(topic.targets[i] > 0 ? 1.0 : 0.0);
      positives += topic.targets[i] > 0 ? 1 : 0;
    }
    if (positives == 0 || positives == rows.size()) {
      report.skipped = true;
      report.diagnostic = "skipped: needs at least one positive and one negative example";
      result.reports.push_back(std::move(report));
      continue;
    }

    std::vector<double> weights(dimension, 0.0);
    double bias = 0.0;
    double loss = regularized_loss(weights, bias, rows, targets, config.l2);
    report.epoch_losses.push_back(loss);

    Rng rng(config.seed + 0x9E3779B97F4A7C15ULL * (t + 1));
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    double rate_scale = 1.0;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
      const double rate = rate_scale * config.learning_rate / (1.0 + config.decay * static_cast<double>(epoch - 1));
      std::vector<double> next_weights = weights;
      double next_bias = bias;
      rng.shuffle(order);
      for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
        std::size_t end = std::min(order.size(), begin + config.batch_size);
        minibatch_step(next_weights, next_bias, rows, targets, std::span(order).subspan(begin, end - begin), config.l2,
                       rate);
      }
      double next_loss = regularized_loss(next_weights, next_bias, rows, targets, config.l2);
      if (std::isnan(next_loss)) throw DivergenceError(topic.topic_id, epoch);
      if (next_loss > loss) {
        // Reject the epoch and retry it at half the rate.
        ++report.backtracks;
        rate_scale *= 0.5;
        if (rate * 0.5 < 1e-12) {
          report.halted = true;
          report.diagnostic = "halted at epoch " + std::to_string(epoch) + ": loss increased at every rate down to " +
                              std::to_string(rate);
          break;
        }
        --epoch;
        continue;
      }
      double improvement = loss - next_loss;
      weights = std::move(next_weights);
      bias = next_bias;
      loss = next_loss;
      report.epoch_losses.push_back(loss);
      if (improvement < config.tolerance) break;
    }

    for (double w : weights)
      if (!std::isfinite(w)) throw DivergenceError(topic.topic_id, report.epoch_losses.size());
    result.classifier.topics.push_back({topic.topic_id, std::move(weights), bias});
    result.reports.push_back(std::move(report));
  }
  return result;
}

Prediction predict(const TopicClassifier& classifier, const SparseVector& features, const TopicHierarchy& hierarchy) {
  check_dimension(features, classifier.dimension);
  Prediction out;
  std::set<std::string> leaves;
  for (const auto& topic : classifier.topics) {
    double p = sigmoid(features.dot(topic.weights) + topic.bias);
    out.probabilities[topic.topic_id] = p;
    if (p >= classifier.threshold) leaves.insert(topic.topic_id);
  }
  out.present = hierarchy.with_parents(leaves);
  return out;
}

}  // namespace convoscope
