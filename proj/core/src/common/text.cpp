#include "convoscope/common/text.hpp"

#include <charconv>

namespace convoscope {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

TokenizerOptions bag_of_words_tokenizer() {
  TokenizerOptions options;
  options.min_length = 2;
  options.drop_stopwords = true;
  return options;
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    bool keep = current.size() >= options.min_length;
    if (keep && options.drop_stopwords && default_stopwords().contains(current)) keep = false;
    if (keep) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      current.push_back(lower_ascii(static_cast<char>(c)));
    } else if (c == '\'' && !current.empty() && i + 1 < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      // apostrophe inside a word: drop it, keep the word joined
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",     "about", "after", "all",   "am",    "an",    "and",   "any",   "are",   "as",
      "at",    "be",    "been",  "but",   "by",    "can",   "could", "did",   "do",    "does",
      "for",   "from",  "had",   "has",   "have",  "he",    "her",   "here",  "him",   "his",
      "how",   "i",     "if",    "in",    "into",  "is",    "it",    "its",   "just",  "me",
      "my",    "of",    "on",    "or",    "our",   "she",   "so",    "than",  "that",  "the",
      "their", "them",  "then",  "there", "these", "they",  "this",  "to",    "too",   "up",
      "us",    "was",   "we",    "were",  "what",  "when",  "which", "who",   "will",  "with",
      "would", "you",   "your",  "im",    "ive",   "youre", "ok",    "okay",  "hi",    "hello"};
  return words;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = lower_ascii(c);
  return out;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  auto begin = text.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  auto end = text.find_last_not_of(kSpace);
  return text.substr(begin, end - begin + 1);
}

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, end);
}

}  // namespace convoscope
