#pragma once

#include <chrono>
#include <string>
#include <unordered_map>
#include <vector>

#include "convoscope/analytics/index.hpp"
#include "convoscope/corpus/corpus.hpp"
#include "convoscope/corpus/synthetic.hpp"
#include "convoscope/sentiment/scoring.hpp"
#include "convoscope/topics/hierarchy.hpp"

namespace fixtures {

using namespace convoscope;

inline Instant at(int y, unsigned m, unsigned d, int hh = 0, int mm = 0, int ss = 0) {
  using namespace std::chrono;
  return sys_days{year{y} / month{m} / day{d}} + hours{hh} + minutes{mm} + seconds{ss};
}

inline FacetSchema small_schema() {
  FacetSchema schema;
  schema.facets = {{"clinic", {"A", "B", "C"}},
                   {"patient_group", {"Diabetes", "Cancer"}},
                   {"age_group", {"20-30", "70-80"}},
                   {"gender", {"F", "M"}}};
  schema.normalize();
  return schema;
}

// Messages one minute apart, alternating patient / provider.
inline Conversation conversation(std::string id, std::vector<std::string> texts, Instant start,
                                 PatientFeatures features = {}) {
  Conversation c;
  c.id = std::move(id);
  c.features = std::move(features);
  c.start_time = start;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Message m;
    m.id = c.id + "-m" + std::to_string(i + 1);
    m.conversation_id = c.id;
    m.sender = i % 2 == 0 ? Sender::kPatient : Sender::kProvider;
    m.timestamp = start + std::chrono::minutes(static_cast<int>(i));
    m.text = std::move(texts[i]);
    c.messages.push_back(std::move(m));
  }
  return c;
}

inline Conversation sized(std::string id, std::size_t n, Instant start = at(2021, 1, 4)) {
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) texts.push_back("message " + std::to_string(i + 1));
  return conversation(std::move(id), std::move(texts), start);
}

inline PatientFeatures features(std::string clinic, std::string group, std::string age, std::string gender) {
  PatientFeatures f;
  f.clinic = std::move(clinic);
  f.patient_group = std::move(group);
  f.age_group = std::move(age);
  f.gender = std::move(gender);
  return f;
}

// Ledger topics (leaves plus their parents) and lexicon sentiment bins, the
// annotations the index would receive from a perfect classifier.
inline std::unordered_map<std::string, ConversationAnnotation> ledger_annotations(const SyntheticCorpus& synthetic,
                                                                                   const TopicHierarchy& hierarchy,
                                                                                   const SentimentLexicon& lexicon) {
  std::unordered_map<std::string, ConversationAnnotation> out;
  for (std::size_t i = 0; i < synthetic.corpus.conversations.size(); ++i) {
    const auto& conv = synthetic.corpus.conversations[i];
    const auto& entry = synthetic.ledger.entries[i];
    std::set<std::string> leaves(entry.planted_topics.begin(), entry.planted_topics.end());
    auto all = hierarchy.with_parents(leaves);
    out[conv.id] = {{all.begin(), all.end()}, bin_counts(conv, lexicon)};
  }
  return out;
}

inline std::vector<std::string> all_topic_ids(const TopicHierarchy& hierarchy) {
  std::vector<std::string> ids;
  for (const auto& n : hierarchy.nodes()) ids.push_back(n.id);
  return ids;
}

}  // namespace fixtures
