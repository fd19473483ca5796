#include "convoscope/service/verdicts.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <json.hpp>

#include "convoscope/common/csv.hpp"
#include "convoscope/common/errors.hpp"

namespace convoscope {

namespace {

using Json = nlohmann::ordered_json;

std::string_view prediction_text(bool present) { return present ? "present" : "absent"; }

bool parse_prediction(std::string_view text) {
  if (text == "present") return true;
  if (text == "absent") return false;
  throw InvalidInputError("model_prediction must be 'present' or 'absent', got '" + std::string(text) + "'");
}

std::string system_error(const std::string& what) { return what + ": " + std::strerror(errno); }

}  // namespace

std::string_view to_string(VerdictKind kind) { return kind == VerdictKind::kAgree ? "agree" : "disagree"; }

VerdictKind parse_verdict_kind(std::string_view text) {
  if (text == "agree") return VerdictKind::kAgree;
  if (text == "disagree") return VerdictKind::kDisagree;
  throw InvalidInputError("verdict must be 'agree' or 'disagree', got '" + std::string(text) + "'");
}

std::string verdict_log_line(const TopicVerdict& verdict) {
  Json j;
  j["conversation_id"] = verdict.conversation_id;
  j["topic_id"] = verdict.topic_id;
  j["model_prediction"] = prediction_text(verdict.model_prediction);
  j["verdict"] = to_string(verdict.verdict);
  j["annotator_id"] = verdict.annotator_id;
  j["recorded_at"] = format_iso8601(verdict.recorded_at);
  return j.dump();
}

TopicVerdict parse_verdict_log_line(std::string_view line) {
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidInputError("verdict log line is not a JSON object");
  auto field = [&](const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string()) throw InvalidInputError(std::string("verdict field '") + name + "' missing");
    return it->get<std::string>();
  };
  TopicVerdict v;
  v.conversation_id = field("conversation_id");
  v.topic_id = field("topic_id");
  v.model_prediction = parse_prediction(field("model_prediction"));
  v.verdict = parse_verdict_kind(field("verdict"));
  v.annotator_id = field("annotator_id");
  v.recorded_at = parse_iso8601(field("recorded_at"));
  return v;
}

VerdictStore::VerdictStore(std::filesystem::path log_path) : path_(std::move(log_path)) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(*path_, ec)) {
    std::ifstream in(*path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        bool ignored = false;
        apply(parse_verdict_log_line(line), ignored);
        ++entries_;
      } catch (const Error&) {
        ++skipped_lines_;
      }
    }
  }
  fd_ = ::open(path_->c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw StorageError(system_error("cannot open verdict log " + path_->string()));
}

VerdictStore::~VerdictStore() {
  if (fd_ >= 0) ::close(fd_);
}

void VerdictStore::apply(const TopicVerdict& verdict, bool& superseded) {
  Key key{verdict.conversation_id, verdict.topic_id, verdict.annotator_id};
  auto [it, inserted] = latest_.insert_or_assign(std::move(key), verdict);
  superseded = !inserted;
}

bool VerdictStore::record(const TopicVerdict& verdict) {
  std::lock_guard lock(mutex_);
  if (fd_ >= 0) {
    std::string line = verdict_log_line(verdict) + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
      ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw StorageError(system_error("verdict log append failed"));
      }
      written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw StorageError(system_error("verdict log fsync failed"));
  }
  bool superseded = false;
  apply(verdict, superseded);
  ++entries_;
  return superseded;
}

std::vector<TopicVerdict> VerdictStore::latest() const {
  std::lock_guard lock(mutex_);
  std::vector<TopicVerdict> out;
  out.reserve(latest_.size());
  for (const auto& [key, verdict] : latest_) out.push_back(verdict);
  return out;
}

std::size_t VerdictStore::log_entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::string export_labels_csv(std::span<const TopicVerdict> verdicts) {
  std::vector<const TopicVerdict*> rows;
  rows.reserve(verdicts.size());
  for (const auto& v : verdicts) rows.push_back(&v);
  std::stable_sort(rows.begin(), rows.end(), [](const TopicVerdict* a, const TopicVerdict* b) {
    return std::tie(a->conversation_id, a->topic_id, a->annotator_id) <
           std::tie(b->conversation_id, b->topic_id, b->annotator_id);
  });
  std::string out =
      "# training label: model_prediction when verdict is agree, the opposite of model_prediction when verdict is "
      "disagree\n";
  out += kLabelsCsvHeader;
  out += '\n';
  for (const auto* v : rows) {
    out += csv::join_row({v->conversation_id, v->topic_id, std::string(prediction_text(v->model_prediction)),
                          std::string(to_string(v->verdict)), v->annotator_id, format_iso8601(v->recorded_at)});
    out += '\n';
  }
  return out;
}

std::vector<TopicVerdict> parse_labels_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError("labels CSV has no header", 0);
  std::vector<std::string> expected;
  {
    std::string header(kLabelsCsvHeader);
    expected = csv::parse(header).front();
  }
  if (rows.front() != expected) throw FormatError("unexpected labels CSV header", 1);
  std::vector<TopicVerdict> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != expected.size()) throw FormatError("labels CSV row has wrong field count", r + 1);
    try {
      TopicVerdict v;
      v.conversation_id = row[0];
      v.topic_id = row[1];
      v.model_prediction = parse_prediction(row[2]);
      v.verdict = parse_verdict_kind(row[3]);
      v.annotator_id = row[4];
      v.recorded_at = parse_iso8601(row[5]);
      out.push_back(std::move(v));
    } catch (const InvalidInputError& e) {
      throw FormatError(e.what(), r + 1);
    }
  }
  return out;
}

AnnotationSet verdicts_to_annotations(std::span<const TopicVerdict> verdicts) {
  std::map<std::pair<std::string, std::string>, AnnotationRecord> records;
  for (const auto& v : verdicts) {
    auto& rec = records[{v.conversation_id, v.annotator_id}];
    rec.conversation_id = v.conversation_id;
    rec.annotator_id = v.annotator_id;
    rec.labels[v.topic_id] = v.derived_label();
  }
  AnnotationSet set;
  for (auto& [key, rec] : records) set.records.push_back(std::move(rec));
  return set;
}

}  // namespace convoscope
