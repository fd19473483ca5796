#include "convoscope/phrase/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {

bool EmbeddingTable::add(std::string word, std::span<const double> vector) {
  if (dimension_ == 0) dimension_ = vector.size();
  if (vector.size() != dimension_ || dimension_ == 0)
    throw InvalidInputError("vector for '" + word + "' has dimension " + std::to_string(vector.size()) +
                            ", expected " + std::to_string(dimension_));
  for (double x : vector)
    if (!std::isfinite(x)) throw InvalidInputError("non-finite entry in vector for '" + word + "'");
  if (index_.contains(word)) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dimension_, dimension_);
}

EmbeddingTable EmbeddingTable::scaled(double factor) const {
  EmbeddingTable out = *this;
  for (double& x : out.data_) x *= factor;
  return out;
}

LoadedEmbeddings read_embeddings(std::istream& in) {
  LoadedEmbeddings out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    auto space = rest.find(' ');
    if (space == std::string_view::npos) throw FormatError("word without vector", line_no);
    std::string word(rest.substr(0, space));
    rest.remove_prefix(space);

    values.clear();
    const char* p = rest.data();
    const char* end = rest.data() + rest.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || (next < end && *next != ' ')) throw FormatError("invalid number", line_no);
      values.push_back(v);
      p = next;
    }
    if (out.table.dimension() != 0 && values.size() != out.table.dimension())
      throw FormatError("expected " + std::to_string(out.table.dimension()) + " values, found " +
                            std::to_string(values.size()),
                        line_no);
    try {
      if (!out.table.add(word, values))
        out.warnings.push_back("line " + std::to_string(line_no) + ": duplicate word '" + word + "' ignored");
    } catch (const InvalidInputError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return out;
}

LoadedEmbeddings load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read embeddings " + path.string());
  return read_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingTable& table) {
  for (const auto& word : table.words()) {
    out << word;
    auto vector = *table.lookup(word);
    for (double x : vector) out << ' ' << format_double(x);
    out << '\n';
  }
}

}  // namespace convoscope
