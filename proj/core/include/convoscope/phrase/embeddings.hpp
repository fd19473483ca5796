#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convoscope {

// Pre-trained word vectors of one fixed dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  // Returns false (and keeps the existing vector) when the word is already
  // present. Throws InvalidInputError on a dimension mismatch or a
  // non-finite entry.
  bool add(std::string word, std::span<const double> vector);

  std::optional<std::span<const double>> lookup(std::string_view word) const;
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Every vector multiplied by `factor`.
  EmbeddingTable scaled(double factor) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

struct LoadedEmbeddings {
  EmbeddingTable table;
  std::vector<std::string> warnings;  // e.g. duplicate words
};

// Lines of `word v1 v2 ... vd`, space-separated. The first line fixes d.
// Throws FormatError naming the offending line.
LoadedEmbeddings read_embeddings(std::istream& in);
LoadedEmbeddings load_embeddings(const std::filesystem::path& path);
void write_embeddings(std::ostream& out, const EmbeddingTable& table);

}  // namespace convoscope
