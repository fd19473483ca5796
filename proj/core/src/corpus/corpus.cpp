#include "convoscope/corpus/corpus.hpp"

#include <algorithm>

#include "convoscope/common/errors.hpp"

namespace convoscope {

std::string_view to_string(Sender sender) {
  return sender == Sender::kPatient ? "patient" : "provider";
}

Sender parse_sender(std::string_view text) {
  if (text == "patient") return Sender::kPatient;
  if (text == "provider") return Sender::kProvider;
  throw InvalidInputError("unknown sender '" + std::string(text) + "'");
}

const std::string& PatientFeatures::value(std::string_view facet) const {
  if (facet == "clinic") return clinic;
  if (facet == "patient_group") return patient_group;
  if (facet == "age_group") return age_group;
  if (facet == "gender") return gender;
  throw InvalidInputError("unknown facet '" + std::string(facet) + "'");
}

std::string& PatientFeatures::value(std::string_view facet) {
  return const_cast<std::string&>(std::as_const(*this).value(facet));
}

const Facet* FacetSchema::find(std::string_view name) const {
  auto it = std::find_if(facets.begin(), facets.end(), [&](const Facet& f) { return f.name == name; });
  return it == facets.end() ? nullptr : &*it;
}

bool FacetSchema::allows(std::string_view facet, std::string_view value) const {
  const Facet* f = find(facet);
  return f != nullptr && std::find(f->values.begin(), f->values.end(), value) != f->values.end();
}

void FacetSchema::normalize() {
  std::vector<Facet> ordered;
  for (auto name : kFacetNames) {
    Facet facet{std::string(name), {}};
    if (const Facet* declared = find(name)) facet.values = declared->values;
    std::vector<std::string> unique;
    for (auto& v : facet.values)
      if (v != kUnknownFacetValue && std::find(unique.begin(), unique.end(), v) == unique.end())
        unique.push_back(v);
    unique.emplace_back(kUnknownFacetValue);
    facet.values = std::move(unique);
    ordered.push_back(std::move(facet));
  }
  facets = std::move(ordered);
}

const Conversation* Corpus::find(std::string_view conversation_id) const {
  auto it = std::find_if(conversations.begin(), conversations.end(),
                         [&](const Conversation& c) { return c.id == conversation_id; });
  return it == conversations.end() ? nullptr : &*it;
}

Corpus filter_short(const Corpus& corpus, std::size_t min_messages) {
  if (min_messages == 0) throw InvalidInputError("min_messages must be at least 1");
  Corpus out;
  out.facet_schema = corpus.facet_schema;
  for (const auto& conversation : corpus.conversations)
    if (conversation.messages.size() >= min_messages) out.conversations.push_back(conversation);
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  if (corpus.conversations.empty()) throw EmptyCorpusError("corpus has no conversations");
  CorpusStats stats;
  stats.conversation_count = corpus.conversations.size();
  stats.time_span = {corpus.conversations.front().start_time, corpus.conversations.front().start_time};
  for (const auto& c : corpus.conversations) {
    stats.message_count += c.messages.size();
    stats.time_span.first = std::min(stats.time_span.first, c.start_time);
    stats.time_span.second = std::max(stats.time_span.second, c.start_time);
  }
  stats.mean_messages =
      static_cast<double>(stats.message_count) / static_cast<double>(stats.conversation_count);
  return stats;
}

}  // namespace convoscope
