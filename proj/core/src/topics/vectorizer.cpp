#include "convoscope/topics/vectorizer.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {

double SparseVector::dot(std::span<const double> dense) const {
  double sum = 0.0;
  for (const auto& [column, value] : entries) sum += dense[column] * value;
  return sum;
}

SparseVector SparseVector::scaled(double factor) const {
  SparseVector out = *this;
  for (auto& entry : out.entries) entry.second *= factor;
  return out;
}

double SparseVector::value(std::uint32_t column) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), column,
                             [](const auto& entry, std::uint32_t c) { return entry.first < c; });
  return (it != entries.end() && it->first == column) ? it->second : 0.0;
}

BowVectorizer::BowVectorizer(std::vector<std::string> vocabulary) : vocabulary_(std::move(vocabulary)) {
  for (std::uint32_t i = 0; i < vocabulary_.size(); ++i)
    if (!columns_.emplace(vocabulary_[i], i).second)
      throw InvalidInputError("duplicate vocabulary token '" + vocabulary_[i] + "'");
}

BowVectorizer BowVectorizer::fit(std::span<const std::string> documents, std::size_t min_doc_freq) {
  if (documents.empty()) throw TrainingDataError("no documents to fit a vocabulary on");
  std::map<std::string, std::size_t> doc_freq;
  for (const auto& document : documents) {
    auto tokens = tokenize(document, bag_of_words_tokenizer());
    std::set<std::string> distinct(tokens.begin(), tokens.end());
    for (const auto& token : distinct) ++doc_freq[token];
  }
  std::vector<std::string> vocabulary;
  for (const auto& [token, freq] : doc_freq)
    if (freq >= min_doc_freq) vocabulary.push_back(token);
  if (vocabulary.empty()) throw TrainingDataError("vocabulary is empty after document-frequency filtering");
  return BowVectorizer(std::move(vocabulary));
}

SparseVector BowVectorizer::transform(std::string_view document) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& token : tokenize(document, bag_of_words_tokenizer()))
    if (auto c = column(token)) counts[*c] += 1.0;
  SparseVector out;
  out.dimension = vocabulary_.size();
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

std::optional<std::uint32_t> BowVectorizer::column(std::string_view token) const {
  auto it = columns_.find(std::string(token));
  if (it == columns_.end()) return std::nullopt;
  return it->second;
}

std::string conversation_text(const Conversation& conversation) {
  std::string text;
  for (const auto& message : conversation.messages) {
    if (!text.empty()) text += '\n';
    text += message.text;
  }
  return text;
}

BowVectorizer fit_vectorizer(std::span<const Conversation> conversations, std::size_t min_doc_freq) {
  std::vector<std::string> documents;
  documents.reserve(conversations.size());
  for (const auto& c : conversations) documents.push_back(conversation_text(c));
  return BowVectorizer::fit(documents, min_doc_freq);
}

}  // namespace convoscope
