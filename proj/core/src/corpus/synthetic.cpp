#include "convoscope/corpus/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"

namespace convoscope {
namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.n_conversations == 0) throw InvalidSpecError("n_conversations must be positive");
  if (spec.short_conversations > spec.n_conversations)
    throw InvalidSpecError("short_conversations exceeds n_conversations");
  if (spec.min_messages < 3 || spec.max_messages < spec.min_messages)
    throw InvalidSpecError("message range must satisfy 3 <= min_messages <= max_messages");
  if (spec.weeks == 0) throw InvalidSpecError("weeks must be positive");
  if (spec.filler_words.empty()) throw InvalidSpecError("filler vocabulary is empty");
  if (spec.polarity_weights.size() != 3) throw InvalidSpecError("polarity_weights needs 3 entries");

  for (const auto& facet : spec.facets) {
    if (facet.values.empty()) throw InvalidSpecError("facet '" + facet.facet + "' has no values");
    if (!facet.weights.empty() && facet.weights.size() != facet.values.size())
      throw InvalidSpecError("facet '" + facet.facet + "' weights do not match values");
    PatientFeatures probe;
    probe.value(facet.facet);  // rejects unknown facet names
  }

  std::set<std::string> reserved(spec.filler_words.begin(), spec.filler_words.end());
  reserved.insert(spec.positive_words.begin(), spec.positive_words.end());
  reserved.insert(spec.negative_words.begin(), spec.negative_words.end());
  std::set<std::string> topic_ids;
  std::set<std::string> keywords;
  for (const auto& topic : spec.topics) {
    if (!topic_ids.insert(topic.topic_id).second)
      throw InvalidSpecError("topic '" + topic.topic_id + "' planted twice");
    if (topic.keywords.empty()) throw InvalidSpecError("topic '" + topic.topic_id + "' has no keywords");
    if (topic.rate < 0.0 || topic.rate > 1.0) throw InvalidSpecError("topic rate outside [0,1]");
    if (topic.mentions == 0) throw InvalidSpecError("topic '" + topic.topic_id + "' needs at least one mention");
    for (const auto& k : topic.keywords) {
      if (!keywords.insert(k).second) throw InvalidSpecError("keyword '" + k + "' shared between topics");
      if (reserved.contains(k)) throw InvalidSpecError("keyword '" + k + "' collides with filler or sentiment words");
    }
  }
}

std::string padded_id(char prefix, std::size_t index, std::size_t total) {
  int width = 1;
  for (std::size_t t = total; t >= 10; t /= 10) ++width;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%c%0*zu", prefix, width, index);
  return buffer;
}

std::string sentence(std::vector<std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  out += '.';
  return out;
}

}  // namespace

const LedgerEntry* GroundTruthLedger::find(const std::string& conversation_id) const {
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const LedgerEntry& e) { return e.conversation_id == conversation_id; });
  return it == entries.end() ? nullptr : &*it;
}

SyntheticSpec default_synthetic_spec(std::size_t n_conversations, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_conversations = n_conversations;
  spec.seed = seed;
  spec.facets = {
      {"clinic", {"A", "B", "C", "D"}, {}},
      {"patient_group", {"Diabetes", "Cancer", "Hypertension", "Asthma"}, {0.35, 0.25, 0.25, 0.15}},
      {"age_group", {"20-30", "30-40", "40-50", "50-60", "60-70", "70-80"}, {0.1, 0.15, 0.2, 0.2, 0.2, 0.15}},
      {"gender", {"F", "M"}, {}},
  };
  spec.topics = {
      {"appointment", {"appointment", "reschedule", "schedule", "calendar"}, 0.30},
      {"outpatient", {"outpatient", "referral", "checkup", "bloodwork"}, 0.20},
      {"medication", {"refill", "pharmacy", "dose", "prescription"}, 0.40},
      {"physical", {"pain", "swelling", "dizzy", "nausea"}, 0.35},
      {"social_services", {"transport", "housing", "insurance", "caregiver"}, 0.15},
  };
  spec.filler_words = {"follow", "question", "message", "morning", "week",   "today",  "tomorrow", "doctor",
                       "nurse",  "team",     "call",    "check",   "time",   "day",    "please",   "let",
                       "know",   "update",   "need",    "see",     "soon",   "back",   "note",     "sure",
                       "reply",  "family",   "home",    "work",    "plan",   "visit",  "evening",  "phone",
                       "number", "office",   "wanted",  "ask",     "about",  "still",  "again",    "later",
                       "friday", "monday",   "result",  "form",    "letter", "email",  "address",  "name"};
  return spec;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  SyntheticCorpus out;
  Corpus& corpus = out.corpus;
  GroundTruthLedger& ledger = out.ledger;

  for (const auto& facet : spec.facets) corpus.facet_schema.facets.push_back({facet.facet, facet.values});
  corpus.facet_schema.normalize();

  std::vector<std::size_t> order(spec.n_conversations);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<bool> is_short(spec.n_conversations, false);
  for (std::size_t i = 0; i < spec.short_conversations; ++i) is_short[order[i]] = true;

  const auto span_seconds = static_cast<std::int64_t>(spec.weeks) * 7 * 86400;

  for (std::size_t c = 0; c < spec.n_conversations; ++c) {
    LedgerEntry entry;
    entry.conversation_id = padded_id('c', c + 1, spec.n_conversations);

    for (const auto& facet : spec.facets) {
      std::vector<double> weights = facet.weights;
      if (weights.empty()) weights.assign(facet.values.size(), 1.0);
      entry.features.value(facet.facet) = facet.values[rng.categorical(weights)];
    }

    entry.message_count = is_short[c] ? static_cast<std::size_t>(rng.between(1, 2))
                                      : static_cast<std::size_t>(rng.between(
                                            static_cast<std::int64_t>(spec.min_messages),
                                            static_cast<std::int64_t>(spec.max_messages)));
    entry.polarity = static_cast<Polarity>(static_cast<int>(rng.categorical(spec.polarity_weights)) - 1);

    // Start during daytime on a uniformly drawn day.
    auto day_offset = rng.between(0, span_seconds / 86400 - 1);
    auto second_of_day = rng.between(8 * 3600, 18 * 3600);
    entry.start_time = spec.start + std::chrono::seconds{day_offset * 86400 + second_of_day};

    std::vector<std::vector<std::string>> words(entry.message_count);
    for (auto& message_words : words) {
      auto length = static_cast<std::size_t>(rng.between(4, 8));
      for (std::size_t w = 0; w < length; ++w) message_words.push_back(spec.filler_words[rng.below(spec.filler_words.size())]);
    }
    auto insert_word = [&](std::vector<std::string>& message_words, const std::string& word) {
      auto at = rng.below(message_words.size() + 1);
      message_words.insert(message_words.begin() + static_cast<std::ptrdiff_t>(at), word);
    };

    for (const auto& topic : spec.topics) {
      if (!rng.bernoulli(topic.rate)) continue;
      entry.planted_topics.push_back(topic.topic_id);
      for (std::size_t i = 0; i < topic.mentions; ++i)
        insert_word(words[rng.below(words.size())], topic.keywords[rng.below(topic.keywords.size())]);
    }

    if (entry.polarity != Polarity::kNeutral) {
      const auto& pool = entry.polarity == Polarity::kPositive ? spec.positive_words : spec.negative_words;
      if (!pool.empty()) {
        // At least one message carries the planted polarity.
        std::size_t anchor = rng.below(words.size());
        for (std::size_t m = 0; m < words.size(); ++m)
          if (m == anchor || rng.bernoulli(0.5)) insert_word(words[m], pool[rng.below(pool.size())]);
      }
    }

    Conversation conversation;
    conversation.id = entry.conversation_id;
    conversation.features = entry.features;
    conversation.start_time = entry.start_time;
    Instant at = entry.start_time;
    for (std::size_t m = 0; m < entry.message_count; ++m) {
      if (m > 0) at += std::chrono::minutes{rng.between(1, 240)};
      Message message;
      message.id = entry.conversation_id + "-m" + std::to_string(m + 1);
      message.conversation_id = entry.conversation_id;
      message.sender = (m % 2 == 0) ? Sender::kPatient : Sender::kProvider;
      message.timestamp = at;
      message.text = sentence(words[m]);
      conversation.messages.push_back(std::move(message));
    }

    ledger.total_messages += entry.message_count;
    for (auto facet : kFacetNames) ++ledger.facet_counts[std::string(facet)][entry.features.value(facet)];
    for (const auto& t : entry.planted_topics) ++ledger.topic_counts[t];
    corpus.conversations.push_back(std::move(conversation));
    ledger.entries.push_back(std::move(entry));
  }
  return out;
}

EmbeddingTable synthetic_embeddings(const SyntheticSpec& spec, std::size_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw InvalidSpecError("embedding dimension must be positive");
  Rng rng(seed);
  auto random_vector = [&](double scale) {
    std::vector<double> v(dimension);
    for (auto& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
    return v;
  };
  EmbeddingTable table(dimension);
  auto add_cluster = [&](const std::vector<std::string>& words) {
    auto center = random_vector(1.0);
    for (const auto& w : words) {
      auto v = random_vector(0.15);
      for (std::size_t i = 0; i < dimension; ++i) v[i] += center[i];
      table.add(w, v);
    }
  };
  for (const auto& topic : spec.topics) add_cluster(topic.keywords);
  add_cluster(spec.positive_words);
  add_cluster(spec.negative_words);
  for (const auto& w : spec.filler_words) table.add(w, random_vector(1.0));
  return table;
}

AnnotationSet synthetic_annotations(const GroundTruthLedger& ledger, std::span<const std::string> topic_ids,
                                    std::size_t annotators, double flip_rate, std::uint64_t seed) {
  if (annotators == 0) throw InvalidSpecError("at least one annotator is required");
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw InvalidSpecError("flip_rate must lie in [0, 1]");
  Rng rng(seed);
  AnnotationSet set;
  for (const auto& entry : ledger.entries) {
    for (std::size_t a = 0; a < annotators; ++a) {
      AnnotationRecord record;
      record.conversation_id = entry.conversation_id;
      record.annotator_id = "annotator" + std::to_string(a + 1);
      for (const auto& topic : topic_ids) {
        bool planted = std::find(entry.planted_topics.begin(), entry.planted_topics.end(), topic) !=
                       entry.planted_topics.end();
        record.labels[topic] = rng.bernoulli(flip_rate) ? !planted : planted;
      }
      set.records.push_back(std::move(record));
    }
  }
  std::sort(set.records.begin(), set.records.end(), [](const AnnotationRecord& x, const AnnotationRecord& y) {
    return std::tie(x.conversation_id, x.annotator_id) < std::tie(y.conversation_id, y.annotator_id);
  });
  return set;
}

}  // namespace convoscope
