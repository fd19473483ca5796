#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convoscope/analytics/bitset.hpp"
#include "convoscope/common/time.hpp"
#include "convoscope/corpus/corpus.hpp"
#include "convoscope/sentiment/scoring.hpp"

namespace convoscope {

// Derived annotations for one conversation: topics present (any level) and
// message counts per sentiment bin.
struct ConversationAnnotation {
  std::vector<std::string> topics;
  SentimentBinCounts sentiment_bins{};
};

struct FacetIndex {
  std::string name;
  std::vector<std::string> values;
  std::vector<Bitset> members;  // one per value; disjoint, covering the universe
};

// Bitsets from facet values, topics and time to conversation positions.
// Positions follow the corpus order. Immutable after build.
class CrossFilterIndex {
 public:
  // Throws IndexingError naming the first conversation without annotation, or
  // a topic missing from `topic_ids`.
  static CrossFilterIndex build(const Corpus& corpus,
                                const std::unordered_map<std::string, ConversationAnnotation>& annotations,
                                std::span<const std::string> topic_ids);

  std::size_t universe() const { return ids_.size(); }
  const std::vector<std::string>& conversation_ids() const { return ids_; }
  std::optional<std::size_t> position(std::string_view conversation_id) const;

  const std::vector<FacetIndex>& facets() const { return facets_; }
  const FacetIndex* facet(std::string_view name) const;
  const Bitset* facet_value(std::string_view facet, std::string_view value) const;

  const std::vector<std::string>& topic_ids() const { return topic_ids_; }
  const Bitset* topic(std::string_view topic_id) const;

  Instant start_time(std::size_t position) const { return start_times_[position]; }
  // Conversations whose start time lies in [from, to].
  Bitset time_range(Instant from, Instant to) const;
  // Positions ordered by (start time, id).
  const std::vector<std::size_t>& chronological() const { return chronological_; }

  const SentimentBinCounts& sentiment_bins(std::size_t position) const { return sentiment_[position]; }
  const PatientFeatures& features(std::size_t position) const { return features_[position]; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> positions_;
  std::vector<FacetIndex> facets_;
  std::vector<std::string> topic_ids_;
  std::vector<Bitset> topics_;
  std::vector<Instant> start_times_;
  std::vector<std::pair<Instant, std::size_t>> by_time_;  // sorted
  std::vector<std::size_t> chronological_;
  std::vector<SentimentBinCounts> sentiment_;
  std::vector<PatientFeatures> features_;
};

}  // namespace convoscope
