#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convoscope/corpus/corpus.hpp"

namespace convoscope {

// Sparse doc-term vector; entries sorted by column, no duplicates.
struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double dot(std::span<const double> dense) const;
  SparseVector scaled(double factor) const;
  double value(std::uint32_t column) const;
};

// Raw-count bag-of-words features over the shared tokenizer with
// bag_of_words_tokenizer() options. Columns follow lexicographic token order.
class BowVectorizer {
 public:
  BowVectorizer() = default;
  explicit BowVectorizer(std::vector<std::string> vocabulary);

  // Keeps tokens that occur in at least min_doc_freq documents. Throws
  // TrainingDataError when nothing survives or no documents are given.
  static BowVectorizer fit(std::span<const std::string> documents, std::size_t min_doc_freq = 2);

  SparseVector transform(std::string_view document) const;
  std::size_t dimension() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  std::optional<std::uint32_t> column(std::string_view token) const;

  bool operator==(const BowVectorizer& other) const { return vocabulary_ == other.vocabulary_; }

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::uint32_t> columns_;
};

// All message texts of a conversation joined by newlines.
std::string conversation_text(const Conversation& conversation);

BowVectorizer fit_vectorizer(std::span<const Conversation> conversations, std::size_t min_doc_freq = 2);

}  // namespace convoscope
