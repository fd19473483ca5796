#include "convoscope/corpus/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kMaxDiagnostics = 20;

void note(IngestReport& report, std::size_t line, const std::string& message) {
  if (report.diagnostics.size() < kMaxDiagnostics)
    report.diagnostics.push_back("line " + std::to_string(line) + ": " + message);
}

std::string required_string(const nlohmann::json& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) throw InvalidInputError(std::string("missing field '") + field + "'");
  if (!it->is_string()) throw InvalidInputError(std::string("field '") + field + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

FacetSchema read_facet_schema(std::istream& in) {
  FacetSchema schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, '\t')) parts.push_back(part);
    if (parts.empty() || parts.front().empty()) throw FormatError("facet line without a name", line_no);
    if (schema.find(parts.front()) != nullptr) throw FormatError("duplicate facet '" + parts.front() + "'", line_no);
    Facet facet{parts.front(), {parts.begin() + 1, parts.end()}};
    std::erase_if(facet.values, [](const std::string& v) { return v.empty(); });
    schema.facets.push_back(std::move(facet));
  }
  schema.normalize();
  return schema;
}

FacetSchema load_facet_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read facet schema " + path.string());
  return read_facet_schema(in);
}

void write_facet_schema(std::ostream& out, const FacetSchema& schema) {
  for (const auto& facet : schema.facets) {
    out << facet.name;
    for (const auto& v : facet.values) out << '\t' << v;
    out << '\n';
  }
}

LoadedCorpus read_corpus(std::istream& records, FacetSchema schema) {
  schema.normalize();
  LoadedCorpus result;
  IngestReport& report = result.report;

  std::vector<Conversation> conversations;
  std::unordered_map<std::string, std::size_t> position;
  std::unordered_set<std::string> message_ids;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(records, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++report.lines_read;
    try {
      auto record = nlohmann::json::parse(line);
      if (!record.is_object()) throw InvalidInputError("record is not a JSON object");
      Message message;
      message.conversation_id = required_string(record, "conversation_id");
      message.id = required_string(record, "message_id");
      message.sender = parse_sender(required_string(record, "sender"));
      message.timestamp = parse_iso8601(required_string(record, "timestamp"));
      message.text = required_string(record, "text");
      if (message.conversation_id.empty() || message.id.empty()) throw InvalidInputError("empty identifier");
      if (trim(message.text).empty()) throw InvalidInputError("empty message text");

      PatientFeatures features;
      for (auto facet : kFacetNames) features.value(facet) = required_string(record, std::string(facet).c_str());

      if (!message_ids.insert(message.id).second) {
        ++report.duplicate_message_ids;
        note(report, line_no, "duplicate message id '" + message.id + "'");
        continue;
      }
      auto [it, inserted] = position.try_emplace(message.conversation_id, conversations.size());
      if (inserted) {
        Conversation conversation;
        conversation.id = message.conversation_id;
        for (auto facet : kFacetNames) {
          std::string& value = features.value(facet);
          if (!schema.allows(facet, value)) {
            ++report.unknown_feature_values;
            note(report, line_no, "undeclared " + std::string(facet) + " value '" + value + "' mapped to unknown");
            value = std::string(kUnknownFacetValue);
          }
        }
        conversation.features = std::move(features);
        conversations.push_back(std::move(conversation));
      }
      conversations[it->second].messages.push_back(std::move(message));
    } catch (const std::exception& e) {
      ++report.malformed_lines;
      note(report, line_no, e.what());
    }
  }

  for (auto& conversation : conversations) {
    std::stable_sort(conversation.messages.begin(), conversation.messages.end(),
                     [](const Message& a, const Message& b) { return a.timestamp < b.timestamp; });
    conversation.start_time = conversation.messages.front().timestamp;
  }
  if (conversations.empty()) throw EmptyCorpusError("no valid conversations in input");

  result.corpus.conversations = std::move(conversations);
  result.corpus.facet_schema = std::move(schema);
  return result;
}

LoadedCorpus load_corpus(const std::filesystem::path& path) {
  std::filesystem::path messages = path;
  std::filesystem::path schema_path;
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    messages = path / kMessagesFile;
    schema_path = path / kSchemaFile;
  } else {
    schema_path = path;
    schema_path += ".schema.tsv";
    if (!std::filesystem::exists(schema_path, ec)) schema_path = path.parent_path() / kSchemaFile;
  }
  std::ifstream records(messages);
  if (!records) throw IngestionError("cannot read message records " + messages.string());
  return read_corpus(records, load_facet_schema(schema_path));
}

std::string message_record(const Conversation& conversation, const Message& message) {
  ordered_json record;
  record["conversation_id"] = conversation.id;
  record["message_id"] = message.id;
  record["sender"] = std::string(to_string(message.sender));
  record["timestamp"] = format_iso8601(message.timestamp);
  record["text"] = message.text;
  for (auto facet : kFacetNames) record[std::string(facet)] = conversation.features.value(facet);
  return record.dump();
}

void write_corpus(std::ostream& records, const Corpus& corpus) {
  for (const auto& conversation : corpus.conversations)
    for (const auto& message : conversation.messages) records << message_record(conversation, message) << '\n';
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  std::ofstream records(directory / kMessagesFile, std::ios::binary | std::ios::trunc);
  std::ofstream schema(directory / kSchemaFile, std::ios::binary | std::ios::trunc);
  if (!records || !schema) throw IngestionError("cannot write corpus to " + directory.string());
  write_corpus(records, corpus);
  write_facet_schema(schema, corpus.facet_schema);
  if (!records.flush() || !schema.flush()) throw IngestionError("failed writing corpus to " + directory.string());
}

}  // namespace convoscope
