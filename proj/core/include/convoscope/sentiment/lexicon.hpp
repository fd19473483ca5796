#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace convoscope {

// Word polarities on the [-2, +2] scale plus context words. A word may be a
// negator or carry a polarity, never both.
struct SentimentLexicon {
  std::unordered_map<std::string, double> polarity;
  std::unordered_set<std::string> negators;
  std::unordered_map<std::string, double> intensifiers;  // multiplier in (0, 3]

  // Throws InvalidInputError when an invariant is violated.
  void validate() const;
  // Same lexicon with every polarity value negated.
  SentimentLexicon negated() const;
};

// One entry per line: `word<TAB>score`, `word<TAB>NEG` or `word<TAB>INTx1.5`.
// Blank lines and lines starting with '#' are ignored. Throws FormatError.
SentimentLexicon read_lexicon(std::istream& in);
SentimentLexicon load_lexicon(const std::filesystem::path& path);
// Entries are written sorted by word so output is stable.
void write_lexicon(std::ostream& out, const SentimentLexicon& lexicon);

// Small general-purpose English lexicon used when no file is supplied.
SentimentLexicon default_lexicon();

}  // namespace convoscope
