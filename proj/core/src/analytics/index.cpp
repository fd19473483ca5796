#include "convoscope/analytics/index.hpp"

#include <algorithm>
#include <numeric>

#include "convoscope/common/errors.hpp"

namespace convoscope {

CrossFilterIndex CrossFilterIndex::build(const Corpus& corpus,
                                         const std::unordered_map<std::string, ConversationAnnotation>& annotations,
                                         std::span<const std::string> topic_ids) {
  CrossFilterIndex index;
  const std::size_t n = corpus.conversations.size();

  FacetSchema schema = corpus.facet_schema;
  schema.normalize();
  for (const auto& facet : schema.facets)
    index.facets_.push_back({facet.name, facet.values, std::vector<Bitset>(facet.values.size(), Bitset(n))});

  index.topic_ids_.assign(topic_ids.begin(), topic_ids.end());
  std::unordered_map<std::string, std::size_t> topic_slot;
  for (std::size_t t = 0; t < index.topic_ids_.size(); ++t)
    if (!topic_slot.emplace(index.topic_ids_[t], t).second)
      throw IndexingError("topic '" + index.topic_ids_[t] + "' listed twice");
  index.topics_.assign(index.topic_ids_.size(), Bitset(n));

  for (std::size_t pos = 0; pos < n; ++pos) {
    const Conversation& conversation = corpus.conversations[pos];
    if (!index.positions_.emplace(conversation.id, pos).second)
      throw IndexingError("duplicate conversation id '" + conversation.id + "'");
    index.ids_.push_back(conversation.id);

    auto annotation = annotations.find(conversation.id);
    if (annotation == annotations.end())
      throw IndexingError("conversation '" + conversation.id + "' has no annotation");

    for (auto& facet : index.facets_) {
      const std::string& value = conversation.features.value(facet.name);
      auto it = std::find(facet.values.begin(), facet.values.end(), value);
      // Undeclared values fall into the trailing "unknown" slot.
      std::size_t slot = it == facet.values.end() ? facet.values.size() - 1
                                                  : static_cast<std::size_t>(it - facet.values.begin());
      facet.members[slot].set(pos);
    }
    for (const auto& topic : annotation->second.topics) {
      auto slot = topic_slot.find(topic);
      if (slot == topic_slot.end())
        throw IndexingError("conversation '" + conversation.id + "' carries unknown topic '" + topic + "'");
      index.topics_[slot->second].set(pos);
    }
    index.start_times_.push_back(conversation.start_time);
    index.by_time_.emplace_back(conversation.start_time, pos);
    index.sentiment_.push_back(annotation->second.sentiment_bins);
    index.features_.push_back(conversation.features);
  }

  std::sort(index.by_time_.begin(), index.by_time_.end());
  index.chronological_.resize(n);
  std::iota(index.chronological_.begin(), index.chronological_.end(), 0);
  std::sort(index.chronological_.begin(), index.chronological_.end(), [&](std::size_t a, std::size_t b) {
    if (index.start_times_[a] != index.start_times_[b]) return index.start_times_[a] < index.start_times_[b];
    return index.ids_[a] < index.ids_[b];
  });
  return index;
}

std::optional<std::size_t> CrossFilterIndex::position(std::string_view conversation_id) const {
  auto it = positions_.find(std::string(conversation_id));
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

const FacetIndex* CrossFilterIndex::facet(std::string_view name) const {
  auto it = std::find_if(facets_.begin(), facets_.end(), [&](const FacetIndex& f) { return f.name == name; });
  return it == facets_.end() ? nullptr : &*it;
}

const Bitset* CrossFilterIndex::facet_value(std::string_view facet_name, std::string_view value) const {
  const FacetIndex* f = facet(facet_name);
  if (f == nullptr) return nullptr;
  auto it = std::find(f->values.begin(), f->values.end(), value);
  if (it == f->values.end()) return nullptr;
  return &f->members[static_cast<std::size_t>(it - f->values.begin())];
}

const Bitset* CrossFilterIndex::topic(std::string_view topic_id) const {
  auto it = std::find(topic_ids_.begin(), topic_ids_.end(), topic_id);
  if (it == topic_ids_.end()) return nullptr;
  return &topics_[static_cast<std::size_t>(it - topic_ids_.begin())];
}

Bitset CrossFilterIndex::time_range(Instant from, Instant to) const {
  Bitset out(universe());
  auto first = std::lower_bound(by_time_.begin(), by_time_.end(), std::make_pair(from, std::size_t{0}));
  for (auto it = first; it != by_time_.end() && it->first <= to; ++it) out.set(it->second);
  return out;
}

}  // namespace convoscope
