#include "convoscope/topics/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "convoscope/common/errors.hpp"

namespace convoscope {
namespace {

constexpr const char* kMagic = "convoscope-topic-model";
constexpr int kVersion = 1;

std::string hex(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%a", value);
  return buffer;
}

double parse_hex(const std::string& text, std::size_t line) {
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') throw FormatError("invalid real '" + text + "'", line);
  return value;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) throw FormatError("unexpected end of model file", line_no_ + 1);
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Reads "<key> <value>" and returns value.
  std::string keyed(const std::string& key) {
    std::string line = next();
    if (line.rfind(key + " ", 0) != 0) throw FormatError("expected '" + key + "'", line_no_);
    return line.substr(key.size() + 1);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::size_t parse_count(const std::string& text, std::size_t line) {
  try {
    std::size_t pos = 0;
    auto value = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(value);
  } catch (const std::exception&) {
    throw FormatError("invalid count '" + text + "'", line);
  }
}

}  // namespace

void write_topic_model(std::ostream& out, const TopicModel& model) {
  const auto& classifier = model.classifier;
  if (classifier.dimension != model.vectorizer.dimension())
    throw FeatureMismatchError("classifier dimension does not match vocabulary size");
  out << kMagic << " v" << kVersion << '\n';
  out << "threshold " << hex(classifier.threshold) << '\n';
  out << "l2 " << hex(classifier.l2) << '\n';
  out << "vocabulary " << model.vectorizer.dimension() << '\n';
  for (const auto& token : model.vectorizer.vocabulary()) out << token << '\n';
  out << "topics " << classifier.topics.size() << '\n';
  for (const auto& topic : classifier.topics) {
    out << topic.topic_id << '\t' << hex(topic.bias);
    for (double w : topic.weights) out << '\t' << hex(w);
    out << '\n';
  }
  out << "end\n";
}

TopicModel read_topic_model(std::istream& in) {
  LineReader reader(in);
  std::string header = reader.next();
  if (header != std::string(kMagic) + " v" + std::to_string(kVersion))
    throw FormatError("unsupported model header '" + header + "'", reader.line_no());

  TopicModel model;
  auto& classifier = model.classifier;
  classifier.threshold = parse_hex(reader.keyed("threshold"), reader.line_no());
  classifier.l2 = parse_hex(reader.keyed("l2"), reader.line_no());
  std::size_t vocabulary_size = parse_count(reader.keyed("vocabulary"), reader.line_no());
  std::vector<std::string> vocabulary;
  vocabulary.reserve(vocabulary_size);
  for (std::size_t i = 0; i < vocabulary_size; ++i) vocabulary.push_back(reader.next());
  try {
    model.vectorizer = BowVectorizer(std::move(vocabulary));
  } catch (const InvalidInputError& e) {
    throw FormatError(e.what(), reader.line_no());
  }
  classifier.dimension = vocabulary_size;

  std::size_t topic_count = parse_count(reader.keyed("topics"), reader.line_no());
  for (std::size_t t = 0; t < topic_count; ++t) {
    std::stringstream row(reader.next());
    TopicWeights topic;
    std::string field;
    if (!std::getline(row, topic.topic_id, '\t') || !std::getline(row, field, '\t'))
      throw FormatError("truncated topic row", reader.line_no());
    topic.bias = parse_hex(field, reader.line_no());
    while (std::getline(row, field, '\t')) topic.weights.push_back(parse_hex(field, reader.line_no()));
    if (topic.weights.size() != vocabulary_size)
      throw FormatError("topic '" + topic.topic_id + "' has " + std::to_string(topic.weights.size()) +
                            " weights, expected " + std::to_string(vocabulary_size),
                        reader.line_no());
    classifier.topics.push_back(std::move(topic));
  }
  if (reader.next() != "end") throw FormatError("missing 'end' marker", reader.line_no());
  return model;
}

void save_topic_model(const TopicModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestionError("cannot write model " + path.string());
  write_topic_model(out, model);
  if (!out.flush()) throw IngestionError("failed writing model " + path.string());
}

TopicModel load_topic_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read model " + path.string());
  return read_topic_model(in);
}

}  // namespace convoscope
