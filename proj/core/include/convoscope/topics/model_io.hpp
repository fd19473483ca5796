#pragma once

#include <filesystem>
#include <iosfwd>

#include "convoscope/topics/classifier.hpp"
#include "convoscope/topics/vectorizer.hpp"

namespace convoscope {

struct TopicModel {
  BowVectorizer vectorizer;
  TopicClassifier classifier;

  bool operator==(const TopicModel&) const = default;
};

// Versioned text dump. Reals are written as hex floats so a save/load
// round-trip is bit-exact. Throws FormatError on malformed input.
void write_topic_model(std::ostream& out, const TopicModel& model);
TopicModel read_topic_model(std::istream& in);
void save_topic_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_topic_model(const std::filesystem::path& path);

}  // namespace convoscope
