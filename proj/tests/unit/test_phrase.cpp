#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"
#include "convoscope/phrase/embeddings.hpp"
#include "convoscope/common/text.hpp"
#include "convoscope/phrase/search.hpp"
#include "fixtures.hpp"

using namespace convoscope;
using fixtures::at;

namespace {

EmbeddingTable table(std::initializer_list<std::pair<const char*, std::vector<double>>> entries) {
  EmbeddingTable t(entries.begin()->second.size());
  for (const auto& [w, v] : entries) t.add(w, v);
  return t;
}

// "ache" sits at cosine 0.95 from "pain".
EmbeddingTable pain_table() {
  const double c = 0.95, s = std::sqrt(1.0 - 0.95 * 0.95);
  return table({{"pain", {1, 0, 0, 0}}, {"ache", {c, s, 0, 0}}, {"refill", {0, 0, 1, 0}}, {"bill", {0, 0, 0, 1}}});
}

Corpus corpus_of(std::vector<std::pair<std::string, std::vector<std::string>>> convs) {
  Corpus c;
  c.facet_schema = fixtures::small_schema();
  for (auto& [id, texts] : convs) c.conversations.push_back(fixtures::conversation(id, texts, at(2021, 1, 4)));
  return c;
}

std::set<std::string> ids(const SearchResult& r) {
  std::set<std::string> out;
  for (const auto& m : r.matches) out.insert(m.conversation_id);
  return out;
}

}  // namespace

TEST(Embeddings, LoadsSmallFile) {
  std::istringstream in("pain 1 0 0.5\nache 0.9 0.1 0.5\n");
  auto loaded = read_embeddings(in);
  EXPECT_EQ(loaded.table.dimension(), 3u);
  EXPECT_EQ(loaded.table.size(), 2u);
  auto v = loaded.table.lookup("ache");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ((*v)[0], 0.9);
  EXPECT_FALSE(loaded.table.lookup("missing").has_value());
}

TEST(Embeddings, ShortLineIsFormatErrorNamingTheLine) {
  std::istringstream in("a 1 2 3\nb 1 2 3\nc 1 2\n");
  try {
    read_embeddings(in);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream nonnumeric("a 1 x 3\n");
  EXPECT_THROW(read_embeddings(nonnumeric), FormatError);
}

TEST(Embeddings, DuplicateKeepsFirstWithWarning) {
  std::istringstream in("a 1 2\nb 3 4\na 5 6\n");
  auto loaded = read_embeddings(in);
  EXPECT_EQ(loaded.table.size(), 2u);
  EXPECT_EQ((*loaded.table.lookup("a"))[0], 1.0);
  EXPECT_EQ(loaded.warnings.size(), 1u);
}

TEST(Embeddings, LargeFileRoundTripsExactly) {
  Rng rng(50);
  EmbeddingTable t(50);
  std::vector<std::vector<double>> vectors;
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> v(50);
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
    t.add("w" + std::to_string(i), v);
    vectors.push_back(v);
  }
  std::ostringstream out;
  write_embeddings(out, t);
  std::istringstream in(out.str());
  auto back = read_embeddings(in).table;
  ASSERT_EQ(back.size(), 10000u);
  for (int i : {0, 1234, 9999}) {
    auto v = back.lookup("w" + std::to_string(i));
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(std::equal(v->begin(), v->end(), vectors[i].begin()));
  }
}

TEST(Embeddings, AddValidates) {
  EmbeddingTable t(2);
  std::vector<double> ok = {1, 2}, wrong = {1, 2, 3}, nan = {1, std::nan("")};
  EXPECT_TRUE(t.add("a", ok));
  EXPECT_FALSE(t.add("a", ok));
  EXPECT_THROW(t.add("b", wrong), InvalidInputError);
  EXPECT_THROW(t.add("c", nan), InvalidInputError);
}

TEST(PhraseVector, MeanOfKnownTokens) {
  auto t = table({{"a", {1, 0}}, {"b", {0, 1}}});
  std::vector<std::string> one = {"a"}, both = {"a", "b"}, with_oov = {"a", "zzz", "b"};
  EXPECT_EQ(phrase_vector(one, t).values, (std::vector<double>{1, 0}));
  EXPECT_EQ(phrase_vector(both, t).values, (std::vector<double>{0.5, 0.5}));
  auto pv = phrase_vector(with_oov, t);
  EXPECT_EQ(pv.values, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(pv.out_of_vocabulary, (std::vector<std::string>{"zzz"}));
  std::vector<std::string> none = {"zzz"};
  EXPECT_THROW(phrase_vector(none, t), OutOfVocabularyError);
}

TEST(PhraseVector, ChestPainElementwiseMean) {
  auto t = table({{"chest", {0.2, -1.0, 3.0}}, {"pain", {0.6, 0.5, -1.0}}});
  std::vector<std::string> q = {"chest", "pain"};
  auto v = phrase_vector(q, t).values;
  const double expected[] = {(0.2 + 0.6) / 2, (-1.0 + 0.5) / 2, (3.0 - 1.0) / 2};
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(v[i], expected[i]);
}

TEST(Cosine, Basics) {
  std::vector<double> v = {0.3, -2.0, 5.0}, x = {1, 0}, y = {0, 1}, h = {0.5, 0.5}, zero = {0, 0};
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-15);
  EXPECT_EQ(cosine(x, y), 0.0);
  EXPECT_NEAR(cosine(x, h), 0.7071, 1e-4);
  EXPECT_NEAR(cosine(x, h), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(cosine(x, zero), UndefinedSimilarityError);
  EXPECT_THROW(cosine(x, v), InvalidInputError);
}

TEST(PhraseQuery, Validation) {
  EXPECT_THROW(PhraseQuery::make("   ", 0.6), InvalidInputError);
  EXPECT_THROW(PhraseQuery::make("pain", 0.0), InvalidInputError);
  EXPECT_THROW(PhraseQuery::make("pain", 1.01), InvalidInputError);
  auto q = PhraseQuery::make("Chest Pain", 1.0);
  EXPECT_EQ(q.tokens, (std::vector<std::string>{"chest", "pain"}));
}

TEST(Search, VerbatimPhraseScoresOne) {
  auto corpus = corpus_of({{"c1", {"hello", "My Chest pain is back"}}, {"c2", {"nothing here"}}});
  auto r = search(PhraseQuery::make("chest pain"), corpus, pain_table());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].conversation_id, "c1");
  EXPECT_EQ(r.matches[0].best_score, 1.0);
  EXPECT_EQ(r.matches[0].match_type, MatchType::kExact);
  EXPECT_EQ(r.matches[0].message_id, "c1-m2");
  EXPECT_EQ(r.matches[0].matched_text, "Chest pain");
}

TEST(Search, SimilarWordMatchesAtItsCosine) {
  auto corpus = corpus_of({{"c1", {"my back ache is bad"}}, {"c2", {"refill please"}}});
  auto r = search(PhraseQuery::make("pain", 0.6), corpus, pain_table());
  ASSERT_EQ(r.matches.size(), 1u);
  EXPECT_EQ(r.matches[0].conversation_id, "c1");
  EXPECT_NEAR(r.matches[0].best_score, 0.95, 1e-12);
  EXPECT_EQ(r.matches[0].match_type, MatchType::kSimilar);
  EXPECT_EQ(r.matches[0].matched_text, "ache");
}

TEST(Search, ThresholdOneKeepsOnlyExactMatches) {
  auto corpus = corpus_of({{"c1", {"back ache"}}, {"c2", {"sharp pain"}}});
  auto r = search(PhraseQuery::make("pain", 1.0), corpus, pain_table());
  EXPECT_EQ(ids(r), (std::set<std::string>{"c2"}));
}

TEST(Search, OutOfVocabularyQueryStillFindsExactMatches) {
  auto corpus = corpus_of({{"c1", {"zebra crossing"}}, {"c2", {"ache"}}});
  auto r = search(PhraseQuery::make("zebra"), corpus, pain_table());
  EXPECT_TRUE(r.query_out_of_vocabulary);
  EXPECT_EQ(ids(r), (std::set<std::string>{"c1"}));
  auto none = search(PhraseQuery::make("giraffe"), corpus, pain_table());
  EXPECT_TRUE(none.matches.empty());
  EXPECT_TRUE(none.query_out_of_vocabulary);
  EXPECT_EQ(none.out_of_vocabulary, (std::vector<std::string>{"giraffe"}));
}

TEST(Search, WithoutEmbeddingsOnlyExactMatches) {
  auto corpus = corpus_of({{"c1", {"back ache"}}, {"c2", {"sharp pain"}}});
  auto r = search(PhraseQuery::make("pain"), corpus, EmbeddingTable{});
  EXPECT_EQ(ids(r), (std::set<std::string>{"c2"}));
}

TEST(Search, RankingIsScoreThenId) {
  auto corpus = corpus_of({{"c3", {"ache"}}, {"c2", {"pain"}}, {"c1", {"pain"}}, {"c0", {"bill"}}});
  auto r = search(PhraseQuery::make("pain", 0.5), corpus, pain_table());
  ASSERT_EQ(r.matches.size(), 3u);
  EXPECT_EQ(r.matches[0].conversation_id, "c1");
  EXPECT_EQ(r.matches[1].conversation_id, "c2");
  EXPECT_EQ(r.matches[2].conversation_id, "c3");
  auto again = search(PhraseQuery::make("pain", 0.5), corpus, pain_table());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(again.matches[i].conversation_id, r.matches[i].conversation_id);
}

TEST(Search, PropertiesOnRandomCorpus) {
  Rng rng(31);
  std::vector<std::string> words = {"pain", "ache", "refill", "bill", "the", "today"};
  Corpus corpus;
  for (int c = 0; c < 80; ++c) {
    std::vector<std::string> texts;
    for (int m = 0; m < 3; ++m) {
      std::string t;
      for (int w = 0; w < 4; ++w) t += words[rng.below(words.size())] + " ";
      texts.push_back(t);
    }
    corpus.conversations.push_back(fixtures::conversation("c" + std::to_string(100 + c), texts, at(2021, 1, 4)));
  }
  auto t = pain_table();
  auto scaled = t.scaled(3.7);
  for (const char* phrase : {"pain", "refill bill", "ache today"}) {
    std::set<std::string> previous;
    bool first = true;
    for (double tau : {1.0, 0.9, 0.7, 0.5, 0.3, 0.1}) {
      auto r = search(PhraseQuery::make(phrase, tau), corpus, t);
      auto current = ids(r);
      if (!first) {
        for (const auto& id : previous) ASSERT_TRUE(current.count(id)) << phrase << " tau " << tau;
      }
      previous = current;
      first = false;
      // Exact-match dominance.
      for (const auto& conv : corpus.conversations) {
        bool verbatim = false;
        for (const auto& m : conv.messages) verbatim |= to_lower(m.text).find(phrase) != std::string::npos;
        if (!verbatim) continue;
        auto it = std::find_if(r.matches.begin(), r.matches.end(),
                               [&](const PhraseMatch& pm) { return pm.conversation_id == conv.id; });
        ASSERT_NE(it, r.matches.end());
        ASSERT_EQ(it->best_score, 1.0);
        ASSERT_EQ(it->match_type, MatchType::kExact);
      }
      // Scale invariance.
      // Scores agree to rounding; a match may only appear on one side when
      // its score sits on the threshold itself.
      auto rs = search(PhraseQuery::make(phrase, tau), corpus, scaled);
      std::map<std::string, double> base, other;
      for (const auto& m : r.matches) base[m.conversation_id] = m.best_score;
      for (const auto& m : rs.matches) other[m.conversation_id] = m.best_score;
      for (const auto& [id, score] : base) {
        if (other.count(id))
          ASSERT_NEAR(other[id], score, 1e-12);
        else
          ASSERT_NEAR(score, tau, 1e-12) << id;
      }
      for (const auto& [id, score] : other)
        if (!base.count(id)) {
          ASSERT_NEAR(score, tau, 1e-12) << id;
        }
    }
  }
}
