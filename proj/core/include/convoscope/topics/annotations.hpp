#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convoscope/topics/classifier.hpp"
#include "convoscope/topics/hierarchy.hpp"

namespace convoscope {

// One annotator's judgements on one conversation. `labels` maps each judged
// topic to its binary label; the annotated topic set is the keys mapped to
// true.
struct AnnotationRecord {
  std::string conversation_id;
  std::string annotator_id;
  std::map<std::string, bool> labels;

  std::set<std::string> topics() const;

  bool operator==(const AnnotationRecord&) const = default;
};

// Records sorted by (conversation_id, annotator_id), one per pair.
struct AnnotationSet {
  std::vector<AnnotationRecord> records;

  // Throws ValidationError when a topic id is not in the hierarchy.
  void validate(const TopicHierarchy& hierarchy) const;
  std::vector<std::string> annotators() const;

  bool operator==(const AnnotationSet&) const = default;
};

// CSV with header `conversation_id,annotator_id,topic_id,label`, label in
// {0,1}. Throws FormatError. Repeated (conversation, annotator, topic) rows:
// the last one wins.
AnnotationSet parse_annotations_csv(std::string_view text);
std::string format_annotations_csv(const AnnotationSet& annotations);

// Per topic: mean Cohen's kappa over annotator pairs, each pair compared on
// the conversations both judged for that topic.
struct TopicAgreement {
  std::string topic_id;
  double mean_kappa = 0.0;
  std::size_t pairs = 0;
  std::size_t items = 0;  // distinct conversations judged by at least two annotators
};

std::vector<TopicAgreement> annotation_agreement(const AnnotationSet& annotations,
                                                 std::span<const std::string> topic_ids);

// Majority vote per (conversation, topic); ties count as positive, missing
// judgements give -1.
std::vector<TopicTargets> consensus_targets(const AnnotationSet& annotations,
                                            std::span<const std::string> conversation_ids,
                                            std::span<const std::string> topic_ids);

}  // namespace convoscope
