#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "convoscope/analytics/index.hpp"
#include "convoscope/analytics/selection.hpp"
#include "convoscope/corpus/corpus.hpp"
#include "convoscope/lda/lda.hpp"
#include "convoscope/phrase/embeddings.hpp"
#include "convoscope/sentiment/lexicon.hpp"
#include "convoscope/sentiment/scoring.hpp"
#include "convoscope/topics/classifier.hpp"
#include "convoscope/topics/hierarchy.hpp"
#include "convoscope/topics/model_io.hpp"

namespace convoscope {

enum class TopicKind { kPredefined, kDiscovered };

std::string_view to_string(TopicKind kind);

inline constexpr std::string_view kDiscoveredParentId = "discovered";

struct TopicCatalogEntry {
  std::string id;
  std::string label;
  std::optional<std::string> parent_id;
  TopicKind kind = TopicKind::kPredefined;
};

struct MessageSentiment {
  double score = 0.0;
  int bin = 0;
};

// Everything derived for one conversation at snapshot build time.
struct ConversationView {
  std::map<std::string, double> probabilities;  // pre-defined leaf topics
  std::set<std::string> topics;                 // present topics of every kind and level
  std::vector<double> discovered_mixture;
  std::vector<MessageSentiment> messages;
  SentimentBinCounts sentiment_bins{};
  SentimentDistribution distribution;
};

struct SnapshotInputs {
  Corpus corpus;
  TopicHierarchy hierarchy;
  std::optional<TopicModel> model;
  SentimentLexicon lexicon;
  std::shared_ptr<const EmbeddingTable> embeddings;
  // Either fit LDA with this config or reuse a fitted model.
  std::optional<LdaConfig> lda_config;
  std::optional<LdaModel> lda_model;
  // A conversation carries a discovered topic when its mixture share is at
  // least 1/k + margin.
  double discovered_margin = 0.1;
};

// Immutable read model behind the HTTP API.
struct Snapshot {
  SnapshotInputs inputs;
  std::vector<DiscoveredTopic> discovered;
  std::vector<TopicCatalogEntry> catalog;  // parents followed by their leaves
  std::vector<ConversationView> views;     // corpus order
  CrossFilterIndex index;

  const Corpus& corpus() const { return inputs.corpus; }
  const TopicCatalogEntry* topic(std::string_view id) const;
  std::vector<std::string> topic_ids_at_level(bool parents) const;
  PhraseResolver phrase_resolver() const;
};

// Scores sentiment, predicts pre-defined topics, fits or applies LDA and
// builds the cross-filter index. Throws on invalid inputs (e.g. a model
// whose topics are not leaves of the hierarchy).
std::shared_ptr<const Snapshot> build_snapshot(SnapshotInputs inputs);

std::string discovered_topic_id(std::size_t topic_index);

}  // namespace convoscope
