#include "convoscope/phrase/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {
namespace {

double norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

PhraseQuery PhraseQuery::make(std::string phrase, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InvalidInputError("tau must lie in (0, 1]");
  PhraseQuery query;
  query.tokens = tokenize(phrase);
  if (query.tokens.empty()) throw InvalidInputError("phrase '" + phrase + "' has no tokens");
  query.phrase = std::move(phrase);
  query.tau = tau;
  return query;
}

PhraseVector phrase_vector(std::span<const std::string> tokens, const EmbeddingTable& table) {
  PhraseVector out;
  out.values.assign(table.dimension(), 0.0);
  std::size_t known = 0;
  for (const auto& token : tokens) {
    auto vector = table.lookup(token);
    if (!vector) {
      out.out_of_vocabulary.push_back(token);
      continue;
    }
    for (std::size_t i = 0; i < vector->size(); ++i) out.values[i] += (*vector)[i];
    ++known;
  }
  if (known == 0) throw OutOfVocabularyError("no phrase token has an embedding");
  for (double& x : out.values) x /= static_cast<double>(known);
  return out;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InvalidInputError("cosine of vectors with different lengths");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw UndefinedSimilarityError("cosine similarity with a zero vector");
  return std::clamp(dot / std::sqrt(uu * vv), -1.0, 1.0);
}

std::string_view to_string(MatchType type) {
  return type == MatchType::kExact ? "exact" : "similar";
}

SearchResult search(const PhraseQuery& query, const Corpus& corpus, const EmbeddingTable& table) {
  SearchResult result;
  const std::string needle = to_lower(trim(query.phrase));

  std::vector<double> query_vector;
  if (table.dimension() > 0) {
    try {
      auto pv = phrase_vector(query.tokens, table);
      query_vector = std::move(pv.values);
      result.out_of_vocabulary = std::move(pv.out_of_vocabulary);
      if (norm(query_vector) == 0.0) query_vector.clear();
    } catch (const OutOfVocabularyError&) {
      result.query_out_of_vocabulary = true;
      result.out_of_vocabulary = query.tokens;
    }
  } else {
    result.query_out_of_vocabulary = true;
    result.out_of_vocabulary = query.tokens;
  }

  const std::size_t window = query.tokens.size();
  std::vector<double> sum(table.dimension());

  for (const auto& conversation : corpus.conversations) {
    std::optional<PhraseMatch> best;
    for (const auto& message : conversation.messages) {
      if (!needle.empty()) {
        auto at = to_lower(message.text).find(needle);
        if (at != std::string::npos) {
          best = PhraseMatch{conversation.id, 1.0, MatchType::kExact, message.id, message.text.substr(at, needle.size())};
          break;
        }
      }
      if (query_vector.empty()) continue;
      auto tokens = tokenize(message.text);
      if (tokens.size() < window) continue;
      for (std::size_t start = 0; start + window <= tokens.size(); ++start) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::size_t known = 0;
        for (std::size_t i = start; i < start + window; ++i) {
          auto vector = table.lookup(tokens[i]);
          if (!vector) continue;
          for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += (*vector)[j];
          ++known;
        }
        if (known == 0) continue;
        for (double& x : sum) x /= static_cast<double>(known);
        if (norm(sum) == 0.0) continue;
        double score = cosine(query_vector, sum);
        if (score < query.tau) continue;
        if (!best || score > best->best_score) {
          std::string span;
          for (std::size_t i = start; i < start + window; ++i) span += (i > start ? " " : "") + tokens[i];
          best = PhraseMatch{conversation.id, score, MatchType::kSimilar, message.id, std::move(span)};
        }
      }
    }
    if (best) result.matches.push_back(std::move(*best));
  }

  std::sort(result.matches.begin(), result.matches.end(), [](const PhraseMatch& a, const PhraseMatch& b) {
    if (a.best_score != b.best_score) return a.best_score > b.best_score;
    return a.conversation_id < b.conversation_id;
  });
  return result;
}

}  // namespace convoscope
