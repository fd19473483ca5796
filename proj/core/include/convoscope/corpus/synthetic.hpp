#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "convoscope/common/time.hpp"
#include "convoscope/corpus/corpus.hpp"
#include "convoscope/phrase/embeddings.hpp"
#include "convoscope/topics/annotations.hpp"

namespace convoscope {

// Stand-in generator for private clinical exports. Topics are planted by
// inserting keywords from disjoint keyword sets; sentiment is planted by
// inserting lexicon words of one polarity.

struct FacetDistribution {
  std::string facet;
  std::vector<std::string> values;
  std::vector<double> weights;  // same length as values; uniform when empty
};

struct PlantedTopic {
  std::string topic_id;
  std::vector<std::string> keywords;
  double rate = 0.3;  // per-conversation planting probability
  std::size_t mentions = 3;  // keyword insertions per planted conversation
};

enum class Polarity { kNegative = -1, kNeutral = 0, kPositive = 1 };

struct SyntheticSpec {
  std::size_t n_conversations = 500;
  // Exactly this many conversations get 1 or 2 messages; the rest get
  // between min_messages and max_messages.
  std::size_t short_conversations = 0;
  std::size_t min_messages = 3;
  std::size_t max_messages = 6;
  std::vector<FacetDistribution> facets;
  std::vector<PlantedTopic> topics;
  // Weights for negative / neutral / positive conversations.
  std::vector<double> polarity_weights = {0.3, 0.4, 0.3};
  std::vector<std::string> positive_words = {"thanks", "great", "better", "helpful", "glad"};
  std::vector<std::string> negative_words = {"worse", "terrible", "worried", "upset", "frustrated"};
  std::vector<std::string> filler_words;
  Instant start = Instant{std::chrono::sys_days{std::chrono::year{2017} / 3 / 6}};
  std::size_t weeks = 52;
  std::uint64_t seed = 7;
};

struct LedgerEntry {
  std::string conversation_id;
  PatientFeatures features;
  std::vector<std::string> planted_topics;
  Polarity polarity = Polarity::kNeutral;
  std::size_t message_count = 0;
  Instant start_time{};
};

struct GroundTruthLedger {
  std::vector<LedgerEntry> entries;  // same order as the corpus
  std::size_t total_messages = 0;
  std::map<std::string, std::map<std::string, std::size_t>> facet_counts;
  std::map<std::string, std::size_t> topic_counts;

  const LedgerEntry* find(const std::string& conversation_id) const;
};

struct SyntheticCorpus {
  Corpus corpus;
  GroundTruthLedger ledger;
};

// Facets, keyword-planted topics for the default topic hierarchy and filler
// vocabulary used by the CLI and the acceptance suite.
SyntheticSpec default_synthetic_spec(std::size_t n_conversations, std::uint64_t seed);

// Deterministic for a given spec. Throws InvalidSpecError for
// n_conversations == 0, short_conversations > n_conversations, overlapping
// keyword sets or keywords that collide with filler / sentiment words.
SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec);

// Toy word vectors for every word the generator can emit. Keywords of one planted
// topic, and sentiment words of one polarity, cluster around a shared random
// direction; filler words point in independent random directions.
EmbeddingTable synthetic_embeddings(const SyntheticSpec& spec, std::size_t dimension = 16, std::uint64_t seed = 11);

// Simulated annotators labelling every planted topic of every conversation:
// the ledger truth, flipped independently with probability flip_rate.
AnnotationSet synthetic_annotations(const GroundTruthLedger& ledger, std::span<const std::string> topic_ids,
                                    std::size_t annotators, double flip_rate, std::uint64_t seed);

}  // namespace convoscope
