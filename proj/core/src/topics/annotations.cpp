#include "convoscope/topics/annotations.hpp"

#include <algorithm>
#include <unordered_map>

#include "convoscope/common/csv.hpp"
#include "convoscope/common/errors.hpp"
#include "convoscope/topics/agreement.hpp"

namespace convoscope {
namespace {

const std::vector<std::string> kHeader = {"conversation_id", "annotator_id", "topic_id", "label"};

}  // namespace

std::set<std::string> AnnotationRecord::topics() const {
  std::set<std::string> out;
  for (const auto& [topic, positive] : labels)
    if (positive) out.insert(topic);
  return out;
}

void AnnotationSet::validate(const TopicHierarchy& hierarchy) const {
  for (const auto& record : records)
    for (const auto& [topic, label] : record.labels)
      if (hierarchy.find(topic) == nullptr)
        throw ValidationError("annotation for conversation '" + record.conversation_id + "' names unknown topic '" +
                              topic + "'");
}

std::vector<std::string> AnnotationSet::annotators() const {
  std::set<std::string> ids;
  for (const auto& record : records) ids.insert(record.annotator_id);
  return {ids.begin(), ids.end()};
}

AnnotationSet parse_annotations_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != kHeader)
    throw FormatError("annotation CSV must start with header conversation_id,annotator_id,topic_id,label", 1);
  std::map<std::pair<std::string, std::string>, AnnotationRecord> grouped;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != kHeader.size()) throw FormatError("expected 4 fields", r + 1);
    if (row[3] != "0" && row[3] != "1") throw FormatError("label must be 0 or 1", r + 1);
    if (row[0].empty() || row[1].empty() || row[2].empty()) throw FormatError("empty identifier", r + 1);
    auto& record = grouped[{row[0], row[1]}];
    record.conversation_id = row[0];
    record.annotator_id = row[1];
    record.labels[row[2]] = row[3] == "1";
  }
  AnnotationSet out;
  for (auto& [key, record] : grouped) out.records.push_back(std::move(record));
  return out;
}

std::string format_annotations_csv(const AnnotationSet& annotations) {
  std::string out = csv::join_row(kHeader) + "\n";
  for (const auto& record : annotations.records)
    for (const auto& [topic, label] : record.labels)
      out += csv::join_row({record.conversation_id, record.annotator_id, topic, label ? "1" : "0"}) + "\n";
  return out;
}

std::vector<TopicAgreement> annotation_agreement(const AnnotationSet& annotations,
                                                 std::span<const std::string> topic_ids) {
  auto annotators = annotations.annotators();
  // annotator -> conversation -> record
  std::unordered_map<std::string, std::unordered_map<std::string, const AnnotationRecord*>> by_annotator;
  for (const auto& record : annotations.records) by_annotator[record.annotator_id][record.conversation_id] = &record;

  std::vector<TopicAgreement> out;
  for (const auto& topic : topic_ids) {
    TopicAgreement agreement;
    agreement.topic_id = topic;
    double kappa_sum = 0.0;
    std::set<std::string> shared_items;
    for (std::size_t i = 0; i < annotators.size(); ++i) {
      for (std::size_t j = i + 1; j < annotators.size(); ++j) {
        std::vector<bool> first, second;
        for (const auto& [conversation, record] : by_annotator[annotators[i]]) {
          auto a = record->labels.find(topic);
          if (a == record->labels.end()) continue;
          auto other = by_annotator[annotators[j]].find(conversation);
          if (other == by_annotator[annotators[j]].end()) continue;
          auto b = other->second->labels.find(topic);
          if (b == other->second->labels.end()) continue;
          first.push_back(a->second);
          second.push_back(b->second);
          shared_items.insert(conversation);
        }
        if (first.empty()) continue;
        kappa_sum += cohens_kappa(first, second).kappa;
        ++agreement.pairs;
      }
    }
    agreement.items = shared_items.size();
    agreement.mean_kappa = agreement.pairs > 0 ? kappa_sum / static_cast<double>(agreement.pairs) : 0.0;
    out.push_back(std::move(agreement));
  }
  return out;
}

std::vector<TopicTargets> consensus_targets(const AnnotationSet& annotations,
                                            std::span<const std::string> conversation_ids,
                                            std::span<const std::string> topic_ids) {
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < conversation_ids.size(); ++i) row_of.emplace(conversation_ids[i], i);

  std::vector<TopicTargets> out;
  for (const auto& topic : topic_ids) {
    std::vector<int> positive(conversation_ids.size(), 0), votes(conversation_ids.size(), 0);
    for (const auto& record : annotations.records) {
      auto row = row_of.find(record.conversation_id);
      if (row == row_of.end()) continue;
      auto label = record.labels.find(topic);
      if (label == record.labels.end()) continue;
      ++votes[row->second];
      positive[row->second] += label->second ? 1 : 0;
    }
    TopicTargets targets{topic, std::vector<std::int8_t>(conversation_ids.size(), -1)};
    for (std::size_t i = 0; i < conversation_ids.size(); ++i)
      if (votes[i] > 0) targets.targets[i] = (2 * positive[i] >= votes[i]) ? 1 : 0;
    out.push_back(std::move(targets));
  }
  return out;
}

}  // namespace convoscope
