#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"
#include "convoscope/common/text.hpp"
#include "convoscope/sentiment/lexicon.hpp"
#include "convoscope/sentiment/scoring.hpp"
#include "fixtures.hpp"

using namespace convoscope;

namespace {

SentimentLexicon lexicon(std::initializer_list<std::pair<const char*, double>> polar,
                         std::initializer_list<const char*> negators = {},
                         std::initializer_list<std::pair<const char*, double>> intensifiers = {}) {
  SentimentLexicon lex;
  for (auto [w, v] : polar) lex.polarity[w] = v;
  for (auto w : negators) lex.negators.insert(w);
  for (auto [w, m] : intensifiers) lex.intensifiers[w] = m;
  return lex;
}

std::vector<std::string> words(const std::string& text) { return tokenize(text); }

// Independent restatement of the scoring rule.
double oracle_score(const std::vector<std::string>& tokens, const SentimentLexicon& lex) {
  double sum = 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto p = lex.polarity.find(tokens[i]);
    if (p == lex.polarity.end()) continue;
    double v = p->second;
    bool negated = false;
    for (std::size_t back = 1; back <= 2 && back <= i; ++back) {
      const auto& w = tokens[i - back];
      if (lex.negators.count(w)) negated = true;
      if (auto it = lex.intensifiers.find(w); it != lex.intensifiers.end()) v *= it->second;
    }
    sum += negated ? -v : v;
    ++hits;
  }
  if (hits == 0) return 0.0;
  return std::clamp(sum / hits, -2.0, 2.0);
}

std::vector<std::string> random_message(Rng& rng, const std::vector<std::string>& vocab) {
  std::vector<std::string> out(1 + rng.below(12));
  for (auto& w : out) w = vocab[rng.below(vocab.size())];
  return out;
}

}  // namespace

TEST(ScoreMessage, EmptyIsNeutral) { EXPECT_EQ(score_message({}, default_lexicon()).value, 0.0); }

TEST(ScoreMessage, MeanOfOppositePolarities) {
  auto lex = lexicon({{"good", 2}, {"awful", -2}});
  EXPECT_DOUBLE_EQ(score_message(words("good awful"), lex).value, 0.0);
}

TEST(ScoreMessage, NegatorFlipsSign) {
  auto lex = lexicon({{"good", 2}}, {"not"});
  EXPECT_DOUBLE_EQ(score_message(words("not good"), lex).value, -2.0);
  EXPECT_DOUBLE_EQ(score_message(words("not very good"), lex).value, -2.0);
  // Outside the two-token window the negator has no effect.
  EXPECT_DOUBLE_EQ(score_message(words("not at all good"), lex).value, 2.0);
}

TEST(ScoreMessage, IntensifierMultipliesAndClamps) {
  auto lex = lexicon({{"good", 1}}, {"not"}, {{"very", 1.5}, {"really", 2.0}});
  EXPECT_DOUBLE_EQ(score_message(words("very good"), lex).value, 1.5);
  EXPECT_DOUBLE_EQ(score_message(words("not very good"), lex).value, -1.5);
  EXPECT_DOUBLE_EQ(score_message(words("really very good"), lex).value, 2.0);  // 3.0 clamped
}

TEST(ScoreMessage, NoHitsIsNeutral) {
  EXPECT_EQ(score_text("the appointment is on tuesday", lexicon({{"good", 2}})).value, 0.0);
}

TEST(ScoreMessage, AgreesWithOracleOnRandomMessages) {
  auto lex = lexicon({{"good", 1.5}, {"bad", -1}, {"great", 2}, {"awful", -2}, {"fine", 0.5}}, {"not", "never"},
                     {{"very", 1.5}, {"slightly", 0.5}, {"extremely", 3}});
  std::vector<std::string> vocab = {"good", "bad", "great", "awful", "fine", "not", "never", "very",
                                    "slightly", "extremely", "the", "pill", "doctor"};
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    auto msg = random_message(rng, vocab);
    ASSERT_NEAR(score_message(msg, lex).value, oracle_score(msg, lex), 1e-12);
  }
}

TEST(ScoreMessage, AntisymmetryAndClampingOverRandomMessages) {
  auto lex = default_lexicon();
  auto neg = lex.negated();
  std::vector<std::string> vocab;
  for (const auto& [w, v] : lex.polarity) vocab.push_back(w);
  for (const auto& w : lex.negators) vocab.push_back(w);
  for (const auto& [w, m] : lex.intensifiers) vocab.push_back(w);
  vocab.insert(vocab.end(), {"pharmacy", "tomorrow", "dose", "call"});
  std::sort(vocab.begin(), vocab.end());
  Rng rng(1000);
  for (int i = 0; i < 1000; ++i) {
    auto msg = random_message(rng, vocab);
    double s = score_message(msg, lex).value;
    ASSERT_EQ(score_message(msg, neg).value, -s);
    ASSERT_LE(std::abs(s), 2.0);
  }
}

TEST(ScoreMessage, PermutationInvariantWithoutContextWords) {
  auto lex = lexicon({{"good", 1.5}, {"bad", -1}, {"great", 2}});
  std::vector<std::string> vocab = {"good", "bad", "great", "pill", "doctor", "refill"};
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    auto msg = random_message(rng, vocab);
    double s = score_message(msg, lex).value;
    rng.shuffle(msg);
    ASSERT_DOUBLE_EQ(score_message(msg, lex).value, s);
  }
}

TEST(BinScore, RoundsHalfAwayFromZero) {
  EXPECT_EQ(bin_score({0.0}), 0);
  EXPECT_EQ(bin_score({1.5}), 2);
  EXPECT_EQ(bin_score({-0.5}), -1);
  EXPECT_EQ(bin_score({0.5}), 1);
  EXPECT_EQ(bin_score({0.49}), 0);
  EXPECT_EQ(bin_score({-2.0}), -2);
  EXPECT_EQ(bin_score({-1.49}), -1);
}

TEST(ConversationDistribution, CountsPerBin) {
  // Polarities chosen so the message bins are +2, +2, 0, -1.
  auto lex = lexicon({{"superb", 2}, {"meh", -1}});
  auto conv = fixtures::conversation("c", {"superb", "superb day", "ordinary", "meh"}, fixtures::at(2021, 1, 1));
  auto d = conversation_distribution(conv, lex);
  EXPECT_DOUBLE_EQ(d.at(2), 0.5);
  EXPECT_DOUBLE_EQ(d.at(0), 0.25);
  EXPECT_DOUBLE_EQ(d.at(-1), 0.25);
  EXPECT_DOUBLE_EQ(d.at(1), 0.0);
  EXPECT_DOUBLE_EQ(d.at(-2), 0.0);
}

TEST(ConversationDistribution, AllNeutralAndSingleton) {
  auto lex = lexicon({{"awful", -2}});
  auto neutral = conversation_distribution(fixtures::conversation("n", {"a", "b", "c"}, fixtures::at(2021, 1, 1)), lex);
  EXPECT_DOUBLE_EQ(neutral.at(0), 1.0);
  auto single = conversation_distribution(fixtures::conversation("s", {"awful"}, fixtures::at(2021, 1, 1)), lex);
  EXPECT_DOUBLE_EQ(single.at(-2), 1.0);
}

TEST(ConversationDistribution, EmptyConversationIsInvalid) {
  Conversation empty;
  empty.id = "e";
  EXPECT_THROW(conversation_distribution(empty, default_lexicon()), InvalidInputError);
}

TEST(ConversationDistribution, SenderFilter) {
  auto lex = lexicon({{"great", 2}, {"awful", -2}});
  // Patient messages are at even positions.
  auto conv = fixtures::conversation("c", {"awful", "great", "awful"}, fixtures::at(2021, 1, 1));
  EXPECT_DOUBLE_EQ(conversation_distribution(conv, lex, Sender::kPatient).at(-2), 1.0);
  EXPECT_DOUBLE_EQ(conversation_distribution(conv, lex, Sender::kProvider).at(2), 1.0);
  auto counts = bin_counts(conv, lex);
  EXPECT_EQ(counts[bin_slot(-2)], 2u);
  EXPECT_EQ(counts[bin_slot(2)], 1u);
}

TEST(ConversationDistribution, SumsToOneOnSyntheticCorpus) {
  auto synthetic = generate_synthetic_corpus(default_synthetic_spec(300, 7));
  auto lex = default_lexicon();
  for (const auto& c : synthetic.corpus.conversations) {
    auto d = conversation_distribution(c, lex);
    double sum = std::accumulate(d.proportions.begin(), d.proportions.end(), 0.0);
    ASSERT_NEAR(sum, 1.0, 1e-9);
    for (double p : d.proportions) ASSERT_GE(p, 0.0);
  }
}

TEST(Lexicon, FileRoundTrip) {
  auto lex = lexicon({{"good", 1.25}, {"bad", -0.1}}, {"not"}, {{"very", 1.5}});
  std::ostringstream out;
  write_lexicon(out, lex);
  std::istringstream in(out.str());
  auto back = read_lexicon(in);
  EXPECT_EQ(back.polarity, lex.polarity);
  EXPECT_EQ(back.negators, lex.negators);
  EXPECT_EQ(back.intensifiers, lex.intensifiers);
}

TEST(Lexicon, ParsesAllEntryKinds) {
  std::istringstream in("# comment\ngood\t2\nnot\tNEG\nvery\tINTx1.5\n\nBad\t-1.5\n");
  auto lex = read_lexicon(in);
  EXPECT_EQ(lex.polarity.at("good"), 2.0);
  EXPECT_EQ(lex.polarity.at("bad"), -1.5);
  EXPECT_TRUE(lex.negators.count("not"));
  EXPECT_EQ(lex.intensifiers.at("very"), 1.5);
}

TEST(Lexicon, RejectsInvalidEntries) {
  for (const char* bad : {"good 2\n", "good\t3\n", "good\tabc\n", "very\tINTx0\n", "very\tINTx4\n", "not\tNEG\nnot\t1\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_lexicon(in), FormatError) << bad;
  }
}

TEST(Lexicon, DefaultIsValidAndCoversGeneratorWords) {
  auto lex = default_lexicon();
  EXPECT_NO_THROW(lex.validate());
  auto spec = default_synthetic_spec(10, 1);
  for (const auto& w : spec.positive_words) EXPECT_GT(lex.polarity.at(w), 0.0) << w;
  for (const auto& w : spec.negative_words) EXPECT_LT(lex.polarity.at(w), 0.0) << w;
}
