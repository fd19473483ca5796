#include <benchmark/benchmark.h>

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "convoscope/analytics/index.hpp"
#include "convoscope/analytics/selection.hpp"
#include "convoscope/common/text.hpp"
#include "convoscope/corpus/synthetic.hpp"
#include "convoscope/lda/lda.hpp"
#include "convoscope/phrase/search.hpp"
#include "convoscope/sentiment/lexicon.hpp"
#include "convoscope/sentiment/scoring.hpp"
#include "convoscope/topics/hierarchy.hpp"

namespace {

using namespace convoscope;

struct World {
  SyntheticSpec spec;
  SyntheticCorpus synthetic;
  TopicHierarchy hierarchy = default_topic_hierarchy();
  SentimentLexicon lexicon = default_lexicon();
  CrossFilterIndex index;
  EmbeddingTable embeddings;

  explicit World(std::size_t n)
      : spec(default_synthetic_spec(n, 7)), synthetic(generate_synthetic_corpus(spec)), embeddings(synthetic_embeddings(spec)) {
    std::unordered_map<std::string, ConversationAnnotation> annotations;
    for (std::size_t i = 0; i < synthetic.corpus.conversations.size(); ++i) {
      const auto& conv = synthetic.corpus.conversations[i];
      const auto& planted = synthetic.ledger.entries[i].planted_topics;
      auto all = hierarchy.with_parents(std::set<std::string>(planted.begin(), planted.end()));
      annotations[conv.id] = {{all.begin(), all.end()}, bin_counts(conv, lexicon)};
    }
    std::vector<std::string> topic_ids;
    for (const auto& node : hierarchy.nodes()) topic_ids.push_back(node.id);
    index = CrossFilterIndex::build(synthetic.corpus, annotations, topic_ids);
  }
};

const World& world(std::size_t n) {
  static std::unordered_map<std::size_t, World> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, World(n)).first;
  return it->second;
}

void BM_ApplySelection(benchmark::State& state) {
  const auto& w = world(static_cast<std::size_t>(state.range(0)));
  FilterSelection selection;
  selection.facets["gender"] = {"F"};
  selection.facets["clinic"] = {w.index.facets().front().values.front()};
  selection.topics = {w.hierarchy.nodes().front().id};
  for (auto _ : state) benchmark::DoNotOptimize(apply_selection(w.index, selection));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ApplySelection)->Arg(500)->Arg(5000);

void BM_LdaFit(benchmark::State& state) {
  const auto& w = world(200);
  std::vector<LdaDocument> docs;
  for (const auto& c : w.synthetic.corpus.conversations) {
    LdaDocument doc{c.id, {}};
    for (const auto& m : c.messages)
      for (auto& t : tokenize(m.text)) doc.tokens.push_back(std::move(t));
    docs.push_back(std::move(doc));
  }
  LdaConfig config;
  config.k = static_cast<std::size_t>(state.range(0));
  config.iterations = 50;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lda(docs, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.iterations));
}
BENCHMARK(BM_LdaFit)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SentimentConversation(benchmark::State& state) {
  const auto& w = world(500);
  std::size_t messages = 0;
  for (auto _ : state) {
    for (const auto& c : w.synthetic.corpus.conversations) {
      benchmark::DoNotOptimize(conversation_distribution(c, w.lexicon));
      messages += c.messages.size();
    }
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(messages));
}
BENCHMARK(BM_SentimentConversation)->Unit(benchmark::kMillisecond);

void BM_PhraseSearch(benchmark::State& state) {
  const auto& w = world(static_cast<std::size_t>(state.range(0)));
  auto query = PhraseQuery::make(w.spec.topics.front().keywords.front());
  for (auto _ : state) benchmark::DoNotOptimize(search(query, w.synthetic.corpus, w.embeddings));
}
BENCHMARK(BM_PhraseSearch)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
