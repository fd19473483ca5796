#include "convoscope/lda/lda.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"

namespace convoscope {
namespace {

struct GibbsState {
  std::size_t k = 0;
  std::size_t vocabulary_size = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::vector<std::uint32_t>> words;       // canonical document order
  std::vector<std::vector<std::uint16_t>> topics;      // same shape as words
  std::vector<std::uint32_t> doc_topic;                // D x k
  std::vector<std::uint32_t> topic_word;               // k x V
  std::vector<std::uint32_t> topic_total;              // k
  std::vector<double> weights;                         // scratch, k

  std::uint32_t& n_dk(std::size_t d, std::size_t t) { return doc_topic[d * k + t]; }
  std::uint32_t& n_kw(std::size_t t, std::size_t w) { return topic_word[t * vocabulary_size + w]; }

  void sweep(Rng& rng) {
    const double v_beta = static_cast<double>(vocabulary_size) * beta;
    for (std::size_t d = 0; d < words.size(); ++d) {
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::uint32_t w = words[d][i];
        std::size_t old_topic = topics[d][i];
        --n_dk(d, old_topic);
        --n_kw(old_topic, w);
        --topic_total[old_topic];

        double total = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
          total += (n_dk(d, t) + alpha) * (n_kw(t, w) + beta) / (topic_total[t] + v_beta);
          weights[t] = total;
        }
        const double u = rng.uniform() * total;
        std::size_t new_topic = 0;
        while (new_topic + 1 < k && weights[new_topic] <= u) ++new_topic;

        topics[d][i] = static_cast<std::uint16_t>(new_topic);
        ++n_dk(d, new_topic);
        ++n_kw(new_topic, w);
        ++topic_total[new_topic];
      }
    }
  }

  double joint_log_likelihood() const {
    const double v = static_cast<double>(vocabulary_size);
    const double kd = static_cast<double>(k);
    double ll = 0.0;
    // log p(w | z)
    ll += kd * (std::lgamma(v * beta) - v * std::lgamma(beta));
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t w = 0; w < vocabulary_size; ++w) ll += std::lgamma(topic_word[t * vocabulary_size + w] + beta);
      ll -= std::lgamma(topic_total[t] + v * beta);
    }
    // log p(z)
    ll += static_cast<double>(words.size()) * (std::lgamma(kd * alpha) - kd * std::lgamma(alpha));
    for (std::size_t d = 0; d < words.size(); ++d) {
      for (std::size_t t = 0; t < k; ++t) ll += std::lgamma(doc_topic[d * k + t] + alpha);
      ll -= std::lgamma(static_cast<double>(words[d].size()) + kd * alpha);
    }
    return ll;
  }
};

}  // namespace

void LdaConfig::validate() const {
  if (k == 0) throw InvalidInputError("LDA needs at least one topic");
  if (k > 65535) throw InvalidInputError("LDA topic count too large");
  if (!(alpha_value() > 0.0)) throw InvalidInputError("alpha must be positive");
  if (!(beta > 0.0)) throw InvalidInputError("beta must be positive");
}

std::optional<std::size_t> LdaModel::word_index(std::string_view word) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), word);
  if (it == vocabulary.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

std::optional<std::size_t> LdaModel::document_index(std::string_view id) const {
  auto it = std::find(document_ids.begin(), document_ids.end(), id);
  if (it == document_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - document_ids.begin());
}

LdaModel fit_lda(std::span<const LdaDocument> documents, const LdaConfig& config) {
  config.validate();
  if (documents.size() < config.k)
    throw InvalidInputError("LDA needs at least k=" + std::to_string(config.k) + " documents");

  LdaModel model;
  model.config = config;
  {
    std::vector<std::string> vocabulary;
    for (const auto& doc : documents) vocabulary.insert(vocabulary.end(), doc.tokens.begin(), doc.tokens.end());
    std::sort(vocabulary.begin(), vocabulary.end());
    vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
    if (vocabulary.empty()) throw TrainingDataError("LDA vocabulary is empty");
    model.vocabulary = std::move(vocabulary);
  }

  std::vector<std::size_t> canonical(documents.size());
  std::iota(canonical.begin(), canonical.end(), 0);
  std::stable_sort(canonical.begin(), canonical.end(),
                   [&](std::size_t a, std::size_t b) { return documents[a].id < documents[b].id; });

  GibbsState state;
  state.k = config.k;
  state.vocabulary_size = model.vocabulary.size();
  state.alpha = config.alpha_value();
  state.beta = config.beta;
  state.doc_topic.assign(documents.size() * state.k, 0);
  state.topic_word.assign(state.k * state.vocabulary_size, 0);
  state.topic_total.assign(state.k, 0);
  state.weights.assign(state.k, 0.0);

  Rng rng(config.seed);
  for (std::size_t d = 0; d < canonical.size(); ++d) {
    const auto& doc = documents[canonical[d]];
    std::vector<std::uint32_t> words;
    std::vector<std::uint16_t> topics;
    for (const auto& token : doc.tokens) {
      auto w = static_cast<std::uint32_t>(*model.word_index(token));
      auto t = static_cast<std::uint16_t>(rng.below(state.k));
      words.push_back(w);
      topics.push_back(t);
      ++state.n_dk(d, t);
      ++state.n_kw(t, w);
      ++state.topic_total[t];
    }
    state.words.push_back(std::move(words));
    state.topics.push_back(std::move(topics));
  }

  if (config.trace_every > 0) model.log_likelihood_trace.emplace_back(0, state.joint_log_likelihood());
  for (std::size_t sweep = 1; sweep <= config.iterations; ++sweep) {
    state.sweep(rng);
    if (config.trace_every > 0 && sweep % config.trace_every == 0)
      model.log_likelihood_trace.emplace_back(sweep, state.joint_log_likelihood());
  }

  const double v_beta = static_cast<double>(state.vocabulary_size) * state.beta;
  model.phi = Matrix(state.k, state.vocabulary_size);
  for (std::size_t t = 0; t < state.k; ++t) {
    const double denominator = state.topic_total[t] + v_beta;
    for (std::size_t w = 0; w < state.vocabulary_size; ++w)
      model.phi(t, w) = (state.n_kw(t, w) + state.beta) / denominator;
  }

  const double k_alpha = static_cast<double>(state.k) * state.alpha;
  model.theta = Matrix(documents.size(), state.k);
  model.token_assignments.resize(documents.size());
  for (std::size_t d = 0; d < canonical.size(); ++d) {
    const std::size_t original = canonical[d];
    const double denominator = static_cast<double>(state.words[d].size()) + k_alpha;
    for (std::size_t t = 0; t < state.k; ++t) model.theta(original, t) = (state.n_dk(d, t) + state.alpha) / denominator;
    model.token_assignments[original] = std::move(state.topics[d]);
  }
  for (const auto& doc : documents) model.document_ids.push_back(doc.id);
  return model;
}

DiscoveredTopic topic_label(const LdaModel& model, std::size_t topic_index) {
  if (topic_index >= model.k())
    throw InvalidInputError("topic index " + std::to_string(topic_index) + " out of range");
  auto row = model.phi.row(topic_index);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t n = std::min(kTopicLabelWords, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return model.vocabulary[a] < model.vocabulary[b];
                    });
  DiscoveredTopic topic;
  topic.topic_index = topic_index;
  for (std::size_t i = 0; i < n; ++i) topic.label.push_back(model.vocabulary[order[i]]);
  if (model.theta.rows > 0) {
    double sum = 0.0;
    for (std::size_t d = 0; d < model.theta.rows; ++d) sum += model.theta(d, topic_index);
    topic.weight = sum / static_cast<double>(model.theta.rows);
  }
  return topic;
}

TopicMixture infer_doc_topics(const LdaModel& model, std::span<const std::string> tokens, std::size_t sweeps,
                              std::uint64_t seed) {
  const std::size_t k = model.k();
  TopicMixture result;
  std::vector<std::size_t> words;
  for (const auto& token : tokens)
    if (auto w = model.word_index(token)) words.push_back(*w);
  result.known_tokens = words.size();
  if (words.empty() || k == 0) {
    result.out_of_vocabulary = words.empty();
    result.mixture.assign(k, k > 0 ? 1.0 / static_cast<double>(k) : 0.0);
    return result;
  }

  const double alpha = model.config.alpha_value();
  const double k_alpha = static_cast<double>(k) * alpha;
  Rng rng(seed);
  std::vector<std::size_t> assignment(words.size());
  std::vector<double> counts(k, 0.0), weights(k, 0.0), accumulated(k, 0.0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    assignment[i] = rng.below(k);
    counts[assignment[i]] += 1.0;
  }

  const std::size_t total_sweeps = std::max<std::size_t>(sweeps, 1);
  const std::size_t burn_in = total_sweeps / 2;
  std::size_t samples = 0;
  for (std::size_t sweep = 0; sweep < total_sweeps; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      counts[assignment[i]] -= 1.0;
      double total = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        total += model.phi(t, words[i]) * (counts[t] + alpha);
        weights[t] = total;
      }
      const double u = rng.uniform() * total;
      std::size_t t = 0;
      while (t + 1 < k && weights[t] <= u) ++t;
      assignment[i] = t;
      counts[t] += 1.0;
    }
    if (sweep >= burn_in) {
      for (std::size_t t = 0; t < k; ++t)
        accumulated[t] += (counts[t] + alpha) / (static_cast<double>(words.size()) + k_alpha);
      ++samples;
    }
  }
  double sum = 0.0;
  for (auto& value : accumulated) sum += value /= static_cast<double>(samples);
  for (auto& value : accumulated) value /= sum;
  result.mixture = std::move(accumulated);
  return result;
}

}  // namespace convoscope
