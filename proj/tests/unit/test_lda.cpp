#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"
#include "convoscope/lda/lda.hpp"

using namespace convoscope;

namespace {

const std::vector<std::string> kClusterA = {"insulin", "glucose", "meter", "sugar", "dose", "pump", "carb"};
const std::vector<std::string> kClusterB = {"parking", "shuttle", "lobby", "elevator", "garage", "ticket", "valet"};

// Documents drawing only from cluster A or only from cluster B.
std::vector<LdaDocument> two_cluster_corpus(std::size_t n_docs, std::uint64_t seed, std::size_t doc_len = 30) {
  Rng rng(seed);
  std::vector<LdaDocument> docs;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const auto& words = d % 2 == 0 ? kClusterA : kClusterB;
    LdaDocument doc;
    char id[16];
    std::snprintf(id, sizeof id, "d%03zu", d);
    doc.id = id;
    for (std::size_t i = 0; i < doc_len; ++i) doc.tokens.push_back(words[rng.below(words.size())]);
    docs.push_back(std::move(doc));
  }
  return docs;
}

void expect_row_stochastic(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    auto row = m.row(r);
    double sum = std::accumulate(row.begin(), row.end(), 0.0);
    ASSERT_NEAR(sum, 1.0, 1e-9) << "row " << r;
    for (double v : row) ASSERT_GE(v, 0.0);
  }
}

LdaModel model_with_phi(std::vector<std::string> vocabulary, std::vector<double> row) {
  LdaModel m;
  m.config.k = 1;
  m.vocabulary = std::move(vocabulary);
  m.phi = Matrix(1, row.size());
  for (std::size_t i = 0; i < row.size(); ++i) m.phi(0, i) = row[i];
  return m;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST(LdaConfig, DefaultsAndValidation) {
  LdaConfig c;
  EXPECT_EQ(c.k, 3u);
  EXPECT_DOUBLE_EQ(c.alpha_value(), 50.0 / 3.0);
  EXPECT_EQ(c.beta, 0.01);
  EXPECT_EQ(c.iterations, 1000u);
  c.k = 0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c.k = 2;
  c.alpha = -1.0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c.alpha = 0.1;
  c.beta = 0.0;
  EXPECT_THROW(c.validate(), InvalidInputError);
}

TEST(FitLda, SingleWordVocabulary) {
  std::vector<LdaDocument> docs = {{"a", {"pain", "pain"}}, {"b", {"pain"}}, {"c", {"pain", "pain", "pain"}}};
  LdaConfig config;
  config.iterations = 20;
  auto model = fit_lda(docs, config);
  ASSERT_EQ(model.vocabulary, (std::vector<std::string>{"pain"}));
  for (std::size_t t = 0; t < model.k(); ++t) EXPECT_NEAR(model.phi(t, 0), 1.0, 1e-12);
  expect_row_stochastic(model.theta);
}

TEST(FitLda, DisjointClustersGivePureTopics) {
  auto docs = two_cluster_corpus(60, 3);
  LdaConfig config;
  config.k = 2;
  config.seed = 11;
  config.iterations = 300;
  auto model = fit_lda(docs, config);
  std::set<std::string> a(kClusterA.begin(), kClusterA.end());
  std::set<std::string> b(kClusterB.begin(), kClusterB.end());
  std::set<bool> clusters_seen;
  for (std::size_t t = 0; t < 2; ++t) {
    auto label = topic_label(model, t).label;
    ASSERT_EQ(label.size(), 5u);
    bool in_a = a.count(label[0]) > 0;
    for (const auto& w : label) EXPECT_EQ(a.count(w) > 0, in_a) << "topic " << t << " word " << w;
    clusters_seen.insert(in_a);
  }
  EXPECT_EQ(clusters_seen.size(), 2u);
}

TEST(FitLda, RowsStochasticAndDeterministic) {
  auto docs = two_cluster_corpus(20, 9);
  LdaConfig config;
  config.k = 4;
  config.iterations = 50;
  config.seed = 5;
  auto m1 = fit_lda(docs, config);
  auto m2 = fit_lda(docs, config);
  expect_row_stochastic(m1.phi);
  expect_row_stochastic(m1.theta);
  EXPECT_EQ(m1.phi, m2.phi);
  EXPECT_EQ(m1.theta, m2.theta);
  EXPECT_EQ(m1.token_assignments, m2.token_assignments);
  config.seed = 6;
  EXPECT_NE(fit_lda(docs, config).token_assignments, m1.token_assignments);
}

TEST(FitLda, DocumentOrderDoesNotMatter) {
  auto docs = two_cluster_corpus(16, 4);
  LdaConfig config;
  config.k = 3;
  config.iterations = 40;
  auto original = fit_lda(docs, config);
  auto shuffled = docs;
  Rng rng(77);
  rng.shuffle(shuffled);
  auto permuted = fit_lda(shuffled, config);
  EXPECT_EQ(permuted.phi, original.phi);
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    auto row = *original.document_index(shuffled[i].id);
    EXPECT_EQ(permuted.document_ids[i], shuffled[i].id);
    for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(permuted.theta(i, t), original.theta(row, t));
  }
}

TEST(FitLda, LogLikelihoodTrendsUpward) {
  auto docs = two_cluster_corpus(40, 8);
  LdaConfig config;
  config.k = 2;
  config.iterations = 200;
  config.trace_every = 1;
  config.alpha = 0.5;
  auto model = fit_lda(docs, config);
  ASSERT_EQ(model.log_likelihood_trace.size(), 201u);  // initial state plus one per sweep
  std::vector<double> medians;
  for (std::size_t w = 0; w + 10 <= model.log_likelihood_trace.size(); w += 10) {
    std::vector<double> window;
    for (std::size_t i = w; i < w + 10; ++i) window.push_back(model.log_likelihood_trace[i].second);
    medians.push_back(median(window));
  }
  EXPECT_GT(medians.back(), medians.front());
  // Window medians never drop by more than sampling noise.
  for (std::size_t i = 1; i < medians.size(); ++i)
    EXPECT_GE(medians[i], medians[i - 1] - 0.01 * std::abs(medians[i - 1])) << "window " << i;
}

TEST(FitLda, Errors) {
  LdaConfig config;
  config.k = 3;
  std::vector<LdaDocument> two = {{"a", {"x", "y"}}, {"b", {"y"}}};
  EXPECT_THROW(fit_lda(two, config), InvalidInputError);
  std::vector<LdaDocument> empty_vocab = {{"a", {}}, {"b", {}}, {"c", {}}};
  EXPECT_THROW(fit_lda(empty_vocab, config), TrainingDataError);
}

TEST(TopicLabel, TopFiveByProbability) {
  auto m = model_with_phi({"w1", "w2", "w3", "w4", "w5", "w6"}, {0.5, 0.3, 0.1, 0.06, 0.03, 0.01});
  EXPECT_EQ(topic_label(m, 0).label, (std::vector<std::string>{"w1", "w2", "w3", "w4", "w5"}));
}

TEST(TopicLabel, SmallVocabularyAndTieBreak) {
  auto small = model_with_phi({"a", "b", "c"}, {0.2, 0.5, 0.3});
  EXPECT_EQ(topic_label(small, 0).label, (std::vector<std::string>{"b", "c", "a"}));
  auto tie = model_with_phi({"alpha", "beta", "p", "q", "r", "s"}, {0.05, 0.05, 0.3, 0.25, 0.2, 0.15});
  EXPECT_EQ(topic_label(tie, 0).label, (std::vector<std::string>{"p", "q", "r", "s", "alpha"}));
  EXPECT_THROW(topic_label(tie, 1), InvalidInputError);
}

TEST(InferDocTopics, TrainingDocumentRecoversItsMixture) {
  auto docs = two_cluster_corpus(40, 12);
  LdaConfig config;
  config.k = 2;
  config.iterations = 300;
  config.seed = 2;
  auto model = fit_lda(docs, config);
  for (std::size_t d = 0; d < 6; ++d) {
    auto mixture = infer_doc_topics(model, docs[d].tokens);
    double tv = 0.0;
    for (std::size_t t = 0; t < 2; ++t) tv += std::abs(mixture.mixture[t] - model.theta(d, t));
    EXPECT_LE(tv / 2.0, 0.1) << docs[d].id;
    EXPECT_FALSE(mixture.out_of_vocabulary);
  }
}

TEST(InferDocTopics, UnknownTokensGiveUniformFlagged) {
  auto docs = two_cluster_corpus(10, 1);
  LdaConfig config;
  config.k = 4;
  config.iterations = 10;
  auto model = fit_lda(docs, config);
  auto mixture = infer_doc_topics(model, std::vector<std::string>{"nothing", "known"});
  EXPECT_TRUE(mixture.out_of_vocabulary);
  for (double v : mixture.mixture) EXPECT_DOUBLE_EQ(v, 0.25);
  EXPECT_TRUE(infer_doc_topics(model, {}).out_of_vocabulary);
}

TEST(InferDocTopics, SingleTopicModel) {
  auto docs = two_cluster_corpus(6, 1);
  LdaConfig config;
  config.k = 1;
  config.iterations = 10;
  auto model = fit_lda(docs, config);
  auto mixture = infer_doc_topics(model, docs[0].tokens);
  ASSERT_EQ(mixture.mixture.size(), 1u);
  EXPECT_DOUBLE_EQ(mixture.mixture[0], 1.0);
}

TEST(LdaDump, RoundTrip) {
  auto docs = two_cluster_corpus(12, 6);
  LdaConfig config;
  config.k = 2;
  config.iterations = 20;
  config.seed = 99;
  auto model = fit_lda(docs, config);
  std::ostringstream out;
  write_lda_model(out, model);
  EXPECT_EQ(out.str().rfind("# convoscope-lda v1\nk 2\nV ", 0), 0u);
  std::istringstream in(out.str());
  auto back = read_lda_model(in);
  EXPECT_EQ(back.phi, model.phi);
  EXPECT_EQ(back.theta, model.theta);
  EXPECT_EQ(back.vocabulary, model.vocabulary);
  EXPECT_EQ(back.document_ids, model.document_ids);
  EXPECT_EQ(back.config.seed, 99u);
  for (std::size_t t = 0; t < 2; ++t) EXPECT_EQ(topic_label(back, t).label, topic_label(model, t).label);
  std::istringstream bad("# convoscope-lda v1\nk x\n");
  EXPECT_THROW(read_lda_model(bad), FormatError);
}
