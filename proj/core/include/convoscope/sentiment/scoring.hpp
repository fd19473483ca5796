#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "convoscope/corpus/corpus.hpp"
#include "convoscope/sentiment/lexicon.hpp"

namespace convoscope {

struct SentimentScore {
  double value = 0.0;  // in [-2, +2]
};

// Number of preceding tokens inspected for negators and intensifiers.
inline constexpr std::size_t kContextWindow = 2;

// Mean of the effective polarities of the polarity-bearing tokens, clamped to
// [-2, +2]. A token's effective polarity is its lexicon value times every
// intensifier in the context window, sign-flipped if the window contains a
// negator. No polarity-bearing token means 0.
SentimentScore score_message(std::span<const std::string> tokens, const SentimentLexicon& lexicon);
// Tokenizes with the shared tokenizer (no stopword removal) and scores.
SentimentScore score_text(std::string_view text, const SentimentLexicon& lexicon);

// Sentiment bins -2..+2, rounded half away from zero.
int bin_score(SentimentScore score);

inline constexpr std::size_t bin_slot(int bin) { return static_cast<std::size_t>(bin + 2); }

// Share of messages per bin; slot i holds bin i-2.
struct SentimentDistribution {
  std::array<double, 5> proportions{};

  double at(int bin) const { return proportions.at(bin_slot(bin)); }
};

// Counts of messages per bin; slot i holds bin i-2.
using SentimentBinCounts = std::array<std::size_t, 5>;

SentimentBinCounts bin_counts(const Conversation& conversation, const SentimentLexicon& lexicon,
                              std::optional<Sender> sender = std::nullopt);
SentimentDistribution distribution_from_counts(const SentimentBinCounts& counts);

// Throws InvalidInputError when no message (of the requested sender) exists.
SentimentDistribution conversation_distribution(const Conversation& conversation, const SentimentLexicon& lexicon,
                                                std::optional<Sender> sender = std::nullopt);

}  // namespace convoscope
