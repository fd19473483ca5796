#pragma once

#include <string>
#include <vector>
#include <span>

#include "convoscope/corpus/corpus.hpp"
#include "convoscope/phrase/embeddings.hpp"

namespace convoscope {

inline constexpr double kDefaultPhraseThreshold = 0.6;

struct PhraseQuery {
  std::string phrase;
  std::vector<std::string> tokens;
  double tau = kDefaultPhraseThreshold;

  // Tokenizes with the shared tokenizer. Throws InvalidInputError when the
  // phrase has no tokens or tau is outside (0, 1].
  static PhraseQuery make(std::string phrase, double tau = kDefaultPhraseThreshold);
};

struct PhraseVector {
  std::vector<double> values;
  std::vector<std::string> out_of_vocabulary;
};

// Arithmetic mean of the known token vectors. Throws OutOfVocabularyError
// when no token is known.
PhraseVector phrase_vector(std::span<const std::string> tokens, const EmbeddingTable& table);

// Throws InvalidInputError for unequal lengths and UndefinedSimilarityError
// for a zero-norm input.
double cosine(std::span<const double> u, std::span<const double> v);

enum class MatchType { kExact, kSimilar };

std::string_view to_string(MatchType type);

struct PhraseMatch {
  std::string conversation_id;
  double best_score = 0.0;
  MatchType match_type = MatchType::kExact;
  std::string message_id;
  std::string matched_text;
};

struct SearchResult {
  // best_score descending, ties by conversation id.
  std::vector<PhraseMatch> matches;
  std::vector<std::string> out_of_vocabulary;
  bool query_out_of_vocabulary = false;
};

// A conversation matches when some message contains the phrase verbatim
// (case-insensitive, score 1) or when a window of query-length tokens in a
// message has a phrase vector within cosine tau of the query's.
SearchResult search(const PhraseQuery& query, const Corpus& corpus, const EmbeddingTable& table);

}  // namespace convoscope
