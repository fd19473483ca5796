#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace convoscope {

// The shared tokenizer. Lowercases ASCII, splits on anything that is not a
// letter or digit, and removes apostrophes inside words ("don't" -> "dont").
// Bytes >= 0x80 are treated as word characters so UTF-8 words survive intact.
struct TokenizerOptions {
  std::size_t min_length = 1;
  bool drop_stopwords = false;
};

// Options used for bag-of-words features and topic modelling: tokens of
// length 1 and stopwords are dropped.
TokenizerOptions bag_of_words_tokenizer();

std::vector<std::string> tokenize(std::string_view text, const TokenizerOptions& options = {});

const std::unordered_set<std::string>& default_stopwords();

std::string to_lower(std::string_view text);
std::string_view trim(std::string_view text);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace convoscope
