#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "convoscope/common/time.hpp"

namespace convoscope {

enum class Sender { kPatient, kProvider };

std::string_view to_string(Sender sender);
// Throws InvalidInputError for anything other than "patient" / "provider".
Sender parse_sender(std::string_view text);

struct Message {
  std::string id;
  std::string conversation_id;
  Sender sender = Sender::kPatient;
  Instant timestamp{};
  std::string text;

  bool operator==(const Message&) const = default;
};

inline constexpr std::string_view kUnknownFacetValue = "unknown";

// The four patient facets, in their canonical order.
inline constexpr std::array<std::string_view, 4> kFacetNames = {"clinic", "patient_group", "age_group",
                                                                 "gender"};

struct PatientFeatures {
  std::string clinic{kUnknownFacetValue};
  std::string patient_group{kUnknownFacetValue};
  std::string age_group{kUnknownFacetValue};
  std::string gender{kUnknownFacetValue};

  // Looks up a feature by facet name; throws InvalidInputError for other names.
  const std::string& value(std::string_view facet) const;
  std::string& value(std::string_view facet);

  bool operator==(const PatientFeatures&) const = default;
};

struct Facet {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const Facet&) const = default;
};

// Ordered legal values per facet. After normalize(), every facet in
// kFacetNames is present and ends with the "unknown" sentinel.
struct FacetSchema {
  std::vector<Facet> facets;

  const Facet* find(std::string_view name) const;
  bool allows(std::string_view facet, std::string_view value) const;
  void normalize();

  bool operator==(const FacetSchema&) const = default;
};

struct Conversation {
  std::string id;
  std::vector<Message> messages;  // ascending by timestamp
  PatientFeatures features;
  Instant start_time{};

  bool operator==(const Conversation&) const = default;
};

struct Corpus {
  std::vector<Conversation> conversations;
  FacetSchema facet_schema;

  const Conversation* find(std::string_view conversation_id) const;

  bool operator==(const Corpus&) const = default;
};

// Keeps the conversations with at least `min_messages` messages, in order.
// Throws InvalidInputError when min_messages is 0.
Corpus filter_short(const Corpus& corpus, std::size_t min_messages = 3);

struct CorpusStats {
  std::size_t conversation_count = 0;
  std::size_t message_count = 0;
  double mean_messages = 0.0;
  std::pair<Instant, Instant> time_span{};
};

// Throws EmptyCorpusError when the corpus has no conversations.
CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace convoscope
