#include "convoscope/sentiment/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {

SentimentScore score_message(std::span<const std::string> tokens, const SentimentLexicon& lexicon) {
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto polar = lexicon.polarity.find(tokens[i]);
    if (polar == lexicon.polarity.end()) continue;
    double effective = polar->second;
    bool negated = false;
    for (std::size_t back = 1; back <= kContextWindow && back <= i; ++back) {
      const std::string& context = tokens[i - back];
      if (lexicon.negators.contains(context)) negated = true;
      if (auto intensifier = lexicon.intensifiers.find(context); intensifier != lexicon.intensifiers.end())
        effective *= intensifier->second;
    }
    sum += negated ? -effective : effective;
    ++hits;
  }
  if (hits == 0) return {0.0};
  return {std::clamp(sum / static_cast<double>(hits), -2.0, 2.0)};
}

SentimentScore score_text(std::string_view text, const SentimentLexicon& lexicon) {
  auto tokens = tokenize(text);
  return score_message(tokens, lexicon);
}

int bin_score(SentimentScore score) {
  return static_cast<int>(std::clamp(std::round(score.value), -2.0, 2.0));
}

SentimentBinCounts bin_counts(const Conversation& conversation, const SentimentLexicon& lexicon,
                              std::optional<Sender> sender) {
  SentimentBinCounts counts{};
  for (const auto& message : conversation.messages) {
    if (sender && message.sender != *sender) continue;
    ++counts[bin_slot(bin_score(score_text(message.text, lexicon)))];
  }
  return counts;
}

SentimentDistribution distribution_from_counts(const SentimentBinCounts& counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw InvalidInputError("no messages to build a sentiment distribution from");
  SentimentDistribution out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.proportions[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return out;
}

SentimentDistribution conversation_distribution(const Conversation& conversation, const SentimentLexicon& lexicon,
                                                std::optional<Sender> sender) {
  if (conversation.messages.empty())
    throw InvalidInputError("conversation '" + conversation.id + "' has no messages");
  return distribution_from_counts(bin_counts(conversation, lexicon, sender));
}

}  // namespace convoscope
