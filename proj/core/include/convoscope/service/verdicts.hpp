#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "convoscope/common/time.hpp"
#include "convoscope/topics/annotations.hpp"

namespace convoscope {

enum class VerdictKind { kAgree, kDisagree };

std::string_view to_string(VerdictKind kind);
// Throws InvalidInputError for anything but "agree" / "disagree".
VerdictKind parse_verdict_kind(std::string_view text);

// A human judgement on one model topic prediction.
struct TopicVerdict {
  std::string conversation_id;
  std::string topic_id;
  bool model_prediction = false;  // topic predicted present
  VerdictKind verdict = VerdictKind::kAgree;
  std::string annotator_id;
  Instant recorded_at{};

  // Training label implied by the verdict: the prediction when agreeing,
  // its negation when disagreeing.
  bool derived_label() const { return verdict == VerdictKind::kAgree ? model_prediction : !model_prediction; }

  bool operator==(const TopicVerdict&) const = default;
};

// Append-only verdict log (one JSON object per line) with latest-wins
// materialization per (conversation, topic, annotator). Writes are
// serialized and fsync'ed before they become visible.
class VerdictStore {
 public:
  // In-memory store; nothing is persisted.
  VerdictStore() = default;
  // Replays an existing log (a torn final line is ignored) and appends to it.
  // Throws StorageError when the log cannot be opened.
  explicit VerdictStore(std::filesystem::path log_path);
  ~VerdictStore();

  VerdictStore(const VerdictStore&) = delete;
  VerdictStore& operator=(const VerdictStore&) = delete;

  // Returns true when the verdict superseded an earlier one for the same key.
  // Throws StorageError when the append fails; the store is unchanged then.
  bool record(const TopicVerdict& verdict);

  // Latest verdict per key, sorted by (conversation_id, topic_id, annotator_id).
  std::vector<TopicVerdict> latest() const;
  std::size_t log_entries() const;
  std::size_t skipped_log_lines() const { return skipped_lines_; }
  const std::optional<std::filesystem::path>& log_path() const { return path_; }

 private:
  using Key = std::tuple<std::string, std::string, std::string>;

  void apply(const TopicVerdict& verdict, bool& superseded);

  mutable std::mutex mutex_;
  std::optional<std::filesystem::path> path_;
  int fd_ = -1;
  std::map<Key, TopicVerdict> latest_;
  std::size_t entries_ = 0;
  std::size_t skipped_lines_ = 0;
};

std::string verdict_log_line(const TopicVerdict& verdict);
// Throws InvalidInputError on a malformed line.
TopicVerdict parse_verdict_log_line(std::string_view line);

inline constexpr std::string_view kLabelsCsvHeader =
    "conversation_id,topic_id,model_prediction,verdict,annotator_id,recorded_at";

// Comment line, header, then one row per verdict sorted by
// (conversation_id, topic_id, annotator_id).
std::string export_labels_csv(std::span<const TopicVerdict> verdicts);
// Inverse of export_labels_csv. Throws FormatError.
std::vector<TopicVerdict> parse_labels_csv(std::string_view text);

// One annotation record per (conversation, annotator) carrying the derived
// labels, ready for retraining.
AnnotationSet verdicts_to_annotations(std::span<const TopicVerdict> verdicts);

}  // namespace convoscope
