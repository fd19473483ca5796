#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "convoscope/corpus/corpus.hpp"

namespace convoscope {

// On-disk layout: a directory holding `messages.jsonl` (one JSON message
// record per line) and `schema.tsv` (one facet per line:
// `name<TAB>value<TAB>value...`). A path to a `.jsonl` file is also accepted;
// its sidecar schema is then `<path>.schema.tsv`, falling back to
// `schema.tsv` in the same directory.
inline constexpr const char* kMessagesFile = "messages.jsonl";
inline constexpr const char* kSchemaFile = "schema.tsv";

struct IngestReport {
  std::size_t lines_read = 0;
  std::size_t malformed_lines = 0;
  std::size_t duplicate_message_ids = 0;
  std::size_t unknown_feature_values = 0;
  // First few diagnostics, e.g. "line 12: missing field 'text'".
  std::vector<std::string> diagnostics;
};

struct LoadedCorpus {
  Corpus corpus;
  IngestReport report;
};

// Throws IngestionError when a file cannot be read, EmptyCorpusError when no
// valid conversation remains. Malformed lines are counted, not fatal.
LoadedCorpus load_corpus(const std::filesystem::path& path);

// Parses message records from a stream against an already-loaded schema.
LoadedCorpus read_corpus(std::istream& records, FacetSchema schema);

FacetSchema read_facet_schema(std::istream& in);
FacetSchema load_facet_schema(const std::filesystem::path& path);
void write_facet_schema(std::ostream& out, const FacetSchema& schema);

std::string message_record(const Conversation& conversation, const Message& message);
void write_corpus(std::ostream& records, const Corpus& corpus);
// Writes messages.jsonl and schema.tsv into `directory` (created if needed).
void save_corpus(const Corpus& corpus, const std::filesystem::path& directory);

}  // namespace convoscope
