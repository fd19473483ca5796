#include "convoscope/sentiment/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <vector>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {
namespace {

double parse_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    throw FormatError("invalid number '" + std::string(text) + "'", line);
  return value;
}

}  // namespace

void SentimentLexicon::validate() const {
  for (const auto& [word, value] : polarity) {
    if (!(value >= -2.0 && value <= 2.0))
      throw InvalidInputError("polarity of '" + word + "' outside [-2, 2]");
    if (negators.contains(word)) throw InvalidInputError("'" + word + "' is both a negator and polar");
  }
  for (const auto& [word, multiplier] : intensifiers)
    if (!(multiplier > 0.0 && multiplier <= 3.0))
      throw InvalidInputError("intensifier '" + word + "' multiplier outside (0, 3]");
}

SentimentLexicon SentimentLexicon::negated() const {
  SentimentLexicon out = *this;
  for (auto& [word, value] : out.polarity) value = -value;
  return out;
}

SentimentLexicon read_lexicon(std::istream& in) {
  SentimentLexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("expected word<TAB>value", line_no);
    std::string word = to_lower(trim(std::string_view(line).substr(0, tab)));
    std::string_view value = trim(std::string_view(line).substr(tab + 1));
    if (word.empty()) throw FormatError("empty word", line_no);
    if (value == "NEG") {
      lexicon.negators.insert(word);
    } else if (value.starts_with("INTx")) {
      lexicon.intensifiers[word] = parse_number(value.substr(4), line_no);
    } else {
      lexicon.polarity[word] = parse_number(value, line_no);
    }
  }
  try {
    lexicon.validate();
  } catch (const InvalidInputError& e) {
    throw FormatError(e.what(), 0);
  }
  return lexicon;
}

SentimentLexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot read lexicon " + path.string());
  return read_lexicon(in);
}

void write_lexicon(std::ostream& out, const SentimentLexicon& lexicon) {
  std::map<std::string, double> polarity(lexicon.polarity.begin(), lexicon.polarity.end());
  std::map<std::string, double> intensifiers(lexicon.intensifiers.begin(), lexicon.intensifiers.end());
  std::vector<std::string> negators(lexicon.negators.begin(), lexicon.negators.end());
  std::sort(negators.begin(), negators.end());
  for (const auto& [word, value] : polarity) out << word << '\t' << format_double(value) << '\n';
  for (const auto& word : negators) out << word << "\tNEG\n";
  for (const auto& [word, value] : intensifiers) out << word << "\tINTx" << format_double(value) << '\n';
}

SentimentLexicon default_lexicon() {
  SentimentLexicon lexicon;
  lexicon.polarity = {
      {"thanks", 1.0},     {"thank", 1.0},      {"great", 2.0},    {"good", 1.0},     {"better", 1.0},
      {"helpful", 1.5},    {"glad", 1.5},       {"happy", 1.5},    {"appreciate", 1.5}, {"excellent", 2.0},
      {"fine", 0.5},       {"improved", 1.0},   {"relieved", 1.0}, {"wonderful", 2.0}, {"awesome", 2.0},
      {"bad", -1.0},       {"worse", -1.5},     {"terrible", -2.0}, {"awful", -2.0},   {"worried", -1.0},
      {"upset", -1.5},     {"frustrated", -1.5}, {"angry", -2.0},  {"scared", -1.5},  {"sad", -1.0},
      {"confused", -0.5},  {"annoyed", -1.0},   {"horrible", -2.0}, {"problem", -0.5}, {"unhappy", -1.5},
  };
  lexicon.negators = {"not", "no", "never", "dont", "didnt", "isnt", "wasnt", "cant", "wont", "doesnt", "without"};
  lexicon.intensifiers = {{"very", 1.5},  {"really", 1.5}, {"so", 1.3},      {"extremely", 2.0},
                          {"slightly", 0.5}, {"somewhat", 0.7}, {"totally", 1.8}};
  return lexicon;
}

}  // namespace convoscope
