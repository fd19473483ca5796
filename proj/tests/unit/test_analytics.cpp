#include <gtest/gtest.h>

#include <numeric>

#include "convoscope/analytics/aggregates.hpp"
#include "convoscope/analytics/bitset.hpp"
#include "convoscope/analytics/index.hpp"
#include "convoscope/analytics/selection.hpp"
#include "convoscope/common/errors.hpp"
#include "convoscope/common/random.hpp"
#include "convoscope/corpus/synthetic.hpp"
#include "convoscope/sentiment/lexicon.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "selection_world.hpp"

using namespace convoscope;
using fixtures::at;

namespace {

std::set<std::string> id_set(const CrossFilterIndex& index, const Bitset& bits) {
  std::set<std::string> out;
  bits.for_each([&](std::size_t p) { out.insert(index.conversation_ids()[p]); });
  return out;
}

// Five conversations; gender F x3, M x2.
struct SmallFixture {
  Corpus corpus;
  std::unordered_map<std::string, ConversationAnnotation> annotations;
  std::vector<std::string> topics = {"A", "B", "physical"};
  CrossFilterIndex index;

  SmallFixture() {
    corpus.facet_schema = fixtures::small_schema();
    auto add = [&](std::string id, PatientFeatures f, std::vector<std::string> topic_ids, Instant start) {
      corpus.conversations.push_back(fixtures::conversation(id, {"one", "two", "three"}, start, f));
      annotations[id] = {std::move(topic_ids), {0, 0, 3, 0, 0}};
    };
    add("c1", fixtures::features("B", "Diabetes", "20-30", "F"), {"A", "B", "physical"}, at(2021, 1, 4));
    add("c2", fixtures::features("B", "Cancer", "70-80", "F"), {"physical"}, at(2021, 1, 5));
    add("c3", fixtures::features("A", "Diabetes", "70-80", "M"), {"physical"}, at(2021, 1, 11));
    add("c4", fixtures::features("B", "Diabetes", "20-30", "M"), {"A"}, at(2021, 1, 12));
    add("c5", fixtures::features("C", "Diabetes", "20-30", "F"), {}, at(2021, 1, 20));
    index = CrossFilterIndex::build(corpus, annotations, topics);
  }
};

}  // namespace

TEST(Bitset, AgreesWithVectorOfBool) {
  Rng rng(3);
  for (std::size_t n : {0u, 1u, 63u, 64u, 65u, 200u}) {
    Bitset a(n), b(n);
    std::vector<bool> va(n), vb(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.bernoulli(0.5)) a.set(i), va[i] = true;
      if (rng.bernoulli(0.5)) b.set(i), vb[i] = true;
    }
    std::size_t both = 0, either = 0, ca = 0;
    bool subset = true;
    for (std::size_t i = 0; i < n; ++i) {
      both += va[i] && vb[i];
      either += va[i] || vb[i];
      ca += va[i];
      if (va[i] && !vb[i]) subset = false;
    }
    EXPECT_EQ(a.count(), ca);
    EXPECT_EQ((a & b).count(), both);
    EXPECT_EQ((a | b).count(), either);
    EXPECT_EQ(a.intersect_count(b), both);
    EXPECT_EQ(a.is_subset_of(b), subset);
    EXPECT_EQ(Bitset::full(n).count(), n);
    EXPECT_EQ(a.positions().size(), ca);
  }
}

TEST(CrossFilterIndex, FacetBitsetsPartitionTheUniverse) {
  SmallFixture f;
  const auto* gender = f.index.facet("gender");
  ASSERT_NE(gender, nullptr);
  EXPECT_EQ(f.index.facet_value("gender", "F")->count(), 3u);
  EXPECT_EQ(f.index.facet_value("gender", "M")->count(), 2u);
  EXPECT_EQ(f.index.facet_value("gender", "F")->intersect_count(*f.index.facet_value("gender", "M")), 0u);
  for (const auto& facet : f.index.facets()) {
    Bitset all(f.index.universe());
    std::size_t total = 0;
    for (const auto& m : facet.members) {
      ASSERT_EQ(all.intersect_count(m), 0u) << facet.name;
      all |= m;
      total += m.count();
    }
    EXPECT_EQ(total, f.index.universe());
    EXPECT_EQ(all, Bitset::full(f.index.universe()));
  }
}

TEST(CrossFilterIndex, MultiTopicConversationInEveryTopicBitset) {
  SmallFixture f;
  auto pos = *f.index.position("c1");
  EXPECT_TRUE(f.index.topic("A")->test(pos));
  EXPECT_TRUE(f.index.topic("B")->test(pos));
  EXPECT_EQ(f.index.topic("missing"), nullptr);
}

TEST(CrossFilterIndex, MissingAnnotationNamesTheConversation) {
  SmallFixture f;
  f.annotations.erase("c3");
  try {
    CrossFilterIndex::build(f.corpus, f.annotations, f.topics);
    FAIL() << "expected IndexingError";
  } catch (const IndexingError& e) {
    EXPECT_NE(std::string(e.what()).find("c3"), std::string::npos);
  }
  SmallFixture g;
  g.annotations["c1"].topics.push_back("nope");
  EXPECT_THROW(CrossFilterIndex::build(g.corpus, g.annotations, g.topics), IndexingError);
}

TEST(CrossFilterIndex, ChronologicalOrderAndTimeRange) {
  SmallFixture f;
  std::vector<std::string> order;
  for (auto p : f.index.chronological()) order.push_back(f.index.conversation_ids()[p]);
  EXPECT_EQ(order, (std::vector<std::string>{"c1", "c2", "c3", "c4", "c5"}));
  EXPECT_EQ(id_set(f.index, f.index.time_range(at(2021, 1, 5), at(2021, 1, 11))),
            (std::set<std::string>{"c2", "c3"}));
}

TEST(CrossFilterIndex, SyntheticCardinalitiesEqualLedger) {
  fixtures::SelectionWorld f;
  const auto& ledger = f.synthetic.ledger;
  for (const auto& facet : f.index.facets()) {
    for (std::size_t v = 0; v < facet.values.size(); ++v) {
      auto expected = 0u;
      auto fc = ledger.facet_counts.find(facet.name);
      if (fc != ledger.facet_counts.end())
        if (auto it = fc->second.find(facet.values[v]); it != fc->second.end()) expected = it->second;
      EXPECT_EQ(facet.members[v].count(), expected) << facet.name << "=" << facet.values[v];
    }
  }
  for (const auto& leaf : f.hierarchy.leaves())
    EXPECT_EQ(f.index.topic(leaf)->count(), ledger.topic_counts.at(leaf)) << leaf;
}

TEST(ApplySelection, EmptySelectionIsUniverse) {
  SmallFixture f;
  EXPECT_EQ(apply_selection(f.index, {}).count(), 5u);
}

TEST(ApplySelection, ClinicBDiabetesPhysical) {
  SmallFixture f;
  FilterSelection sel;
  sel.facets["clinic"] = {"B"};
  sel.facets["patient_group"] = {"Diabetes"};
  sel.topics = {"physical"};
  EXPECT_EQ(id_set(f.index, apply_selection(f.index, sel)), (std::set<std::string>{"c1"}));
}

TEST(ApplySelection, OrWithinFacetAndAcrossTopics) {
  SmallFixture f;
  FilterSelection sel;
  sel.facets["clinic"] = {"A", "C"};
  EXPECT_EQ(id_set(f.index, apply_selection(f.index, sel)), (std::set<std::string>{"c3", "c5"}));
  FilterSelection topics;
  topics.topics = {"A", "physical"};
  EXPECT_EQ(id_set(f.index, apply_selection(f.index, topics)), (std::set<std::string>{"c1"}));
}

TEST(ApplySelection, PhraseWithoutResolverIsRejected) {
  SmallFixture f;
  FilterSelection sel;
  sel.phrase = PhraseConstraint{"pain", 0.6};
  EXPECT_THROW(apply_selection(f.index, sel), InvalidInputError);
}

TEST(ApplySelection, ThousandRandomSelectionsMatchLinearScan) {
  fixtures::SelectionWorld f;
  auto resolver = f.resolver();
  Rng rng(1000);
  for (int i = 0; i < 1000; ++i) {
    auto [sel, q] = fixtures::random_selection(rng, f);
    auto result = apply_selection(f.index, sel, resolver);
    ASSERT_EQ(id_set(f.index, result), oracle::scan(f.rows, q)) << selection_to_json(sel);
    ASSERT_EQ(apply_selection(f.index, sel, resolver), result);  // idempotent
  }
}

TEST(ApplySelection, AddingAConstraintNeverGrows) {
  fixtures::SelectionWorld f;
  auto resolver = f.resolver();
  Rng rng(55);
  for (int i = 0; i < 300; ++i) {
    auto [sel, q] = fixtures::random_selection(rng, f);
    auto base = apply_selection(f.index, sel, resolver);
    FilterSelection narrower = sel;
    if (rng.bernoulli(0.5)) {
      narrower.topics.insert(f.index.topic_ids()[rng.below(f.index.topic_ids().size())]);
    } else {
      const auto& facet = f.index.facets()[rng.below(f.index.facets().size())];
      if (!narrower.facets[facet.name].empty()) continue;  // a new value would widen an OR
      narrower.facets[facet.name].insert(facet.values[rng.below(facet.values.size())]);
    }
    ASSERT_TRUE(apply_selection(f.index, narrower, resolver).is_subset_of(base));
  }
}

TEST(ValidateSelection, ReportsEveryProblem) {
  SmallFixture f;
  FilterSelection sel;
  sel.facets["clinic"] = {"Z"};
  sel.facets["planet"] = {"Mars"};
  sel.topics = {"unknown_topic"};
  sel.time_range = TimeRange{at(2021, 2, 1), at(2021, 1, 1)};
  sel.phrase = PhraseConstraint{"", 1.5};
  try {
    validate_selection(sel, f.index);
    FAIL() << "expected SelectionError";
  } catch (const SelectionError& e) {
    std::set<std::string> fields;
    for (const auto& d : e.diagnostics()) fields.insert(d.field);
    EXPECT_TRUE(fields.count("facets.clinic"));
    EXPECT_TRUE(fields.count("facets.planet"));
    EXPECT_TRUE(fields.count("topics"));
    EXPECT_TRUE(fields.count("time_range"));
    EXPECT_GE(e.diagnostics().size(), 5u);
  }
  EXPECT_NO_THROW(validate_selection({}, f.index));
}

TEST(SelectionJson, RoundTripAndMalformedInput) {
  FilterSelection sel;
  sel.facets["clinic"] = {"B", "A"};
  sel.topics = {"physical"};
  sel.time_range = TimeRange{at(2021, 1, 1), at(2021, 3, 1, 12)};
  sel.phrase = PhraseConstraint{"chest pain", 0.75};
  EXPECT_EQ(parse_selection_json(selection_to_json(sel)), sel);
  EXPECT_EQ(parse_selection_json("{}"), FilterSelection{});
  EXPECT_TRUE(parse_selection_json("{}").empty());
  for (const char* bad : {"{", "[]", R"({"facets":[1]})", R"({"facets":{"clinic":"B"}})", R"({"topics":[1]})",
                          R"({"time_range":["2021-01-01T00:00:00Z"]})", R"({"time_range":["x","y"]})",
                          R"({"phrase":{"text":"p","tau":"high"}})", R"({"colour":"blue"})"})
    EXPECT_THROW(parse_selection_json(bad), SelectionError) << bad;
}

TEST(FacetProportions, EmptySelectionMatchedEqualsTotal) {
  fixtures::SelectionWorld f;
  for (const auto& facet : facet_proportions(f.index, {}))
    for (const auto& v : facet.values) EXPECT_EQ(v.matched, v.total) << facet.facet << "=" << v.value;
}

TEST(FacetProportions, GenderSelectionKeepsGenderTotals) {
  fixtures::SelectionWorld f;
  FilterSelection sel;
  sel.facets["gender"] = {"F"};
  auto baseline = facet_proportions(f.index, {});
  auto props = facet_proportions(f.index, sel);
  ASSERT_EQ(props.size(), baseline.size());
  for (std::size_t i = 0; i < props.size(); ++i) {
    const auto& facet = props[i];
    for (std::size_t v = 0; v < facet.values.size(); ++v) {
      const auto& value = facet.values[v];
      std::size_t expected = 0;
      for (const auto& row : f.rows)
        expected += row.features.at("gender") == "F" && row.features.at(facet.facet) == value.value;
      EXPECT_EQ(value.matched, expected) << facet.facet << "=" << value.value;
      if (facet.facet == "gender") {
        EXPECT_EQ(value.total, baseline[i].values[v].total);
      }
    }
  }
}

TEST(FacetProportions, PartitionAndBoundsOnRandomSelections) {
  fixtures::SelectionWorld f;
  auto resolver = f.resolver();
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    auto [sel, q] = fixtures::random_selection(rng, f);
    auto full = apply_selection(f.index, sel, resolver).count();
    for (const auto& facet : facet_proportions(f.index, sel, resolver)) {
      std::size_t matched = 0;
      for (const auto& v : facet.values) {
        ASSERT_LE(v.matched, v.total);
        ASSERT_LE(v.total, f.index.universe());
        matched += v.matched;
      }
      ASSERT_EQ(matched, full) << facet.facet;
      // total = base set without this facet's own constraint
      auto qb = q;
      qb.facets.erase(facet.facet);
      ASSERT_EQ(std::accumulate(facet.values.begin(), facet.values.end(), std::size_t{0},
                                [](std::size_t s, const ValueProportion& v) { return s + v.total; }),
                oracle::scan(f.rows, qb).size());
    }
  }
}

TEST(TopicProportions, EmptySelectionEqualsIndexCardinalities) {
  fixtures::SelectionWorld f;
  for (const auto& p : topic_proportions(f.index, {})) {
    EXPECT_EQ(p.total, f.index.topic(p.topic_id)->count());
    EXPECT_EQ(p.matched, p.total);
    std::size_t messages = 0;
    f.index.topic(p.topic_id)->for_each([&](std::size_t pos) {
      for (auto c : f.index.sentiment_bins(pos)) messages += c;
    });
    EXPECT_EQ(std::accumulate(p.sentiment_bins.begin(), p.sentiment_bins.end(), std::size_t{0}), messages);
  }
}

TEST(WeeklyTrend, ThreeConversationsInOneWeek) {
  Corpus corpus;
  corpus.facet_schema = fixtures::small_schema();
  std::unordered_map<std::string, ConversationAnnotation> ann;
  for (int i = 0; i < 3; ++i) {
    std::string id = "c" + std::to_string(i);
    corpus.conversations.push_back(fixtures::sized(id, 3, at(2021, 1, 4 + i)));
    ann[id] = {{"logistics"}, {}};
  }
  std::vector<std::string> topics = {"logistics"};
  auto index = CrossFilterIndex::build(corpus, ann, topics);
  auto trend = weekly_trend(index, {}, topics);
  ASSERT_EQ(trend.weeks.size(), 1u);
  EXPECT_EQ(trend.series.at(0).points.at(0).conversations, 3u);
}

TEST(WeeklyTrend, SundayAndMondayLandInDifferentWeeksWithGapsFilled) {
  Corpus corpus;
  corpus.facet_schema = fixtures::small_schema();
  std::unordered_map<std::string, ConversationAnnotation> ann;
  std::vector<Instant> starts = {at(2021, 1, 10, 23), at(2021, 1, 11, 1), at(2021, 2, 1)};
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::string id = "c" + std::to_string(i);
    corpus.conversations.push_back(fixtures::sized(id, 3, starts[i]));
    ann[id] = {{"logistics"}, {}};
  }
  std::vector<std::string> topics = {"logistics"};
  auto index = CrossFilterIndex::build(corpus, ann, topics);
  auto trend = weekly_trend(index, {}, topics);
  ASSERT_EQ(trend.weeks.size(), 5u);
  std::vector<std::size_t> counts;
  for (const auto& p : trend.series[0].points) counts.push_back(p.conversations);
  EXPECT_EQ(counts, (std::vector<std::size_t>{1, 1, 0, 0, 1}));
  for (std::size_t i = 1; i < trend.weeks.size(); ++i) EXPECT_LT(trend.weeks[i - 1], trend.weeks[i]);
}

TEST(WeeklyTrend, RecoversPlantedRamp) {
  // Week w (1-based) holds w treatment conversations plus one logistics one.
  Corpus corpus;
  corpus.facet_schema = fixtures::small_schema();
  std::unordered_map<std::string, ConversationAnnotation> ann;
  const int weeks = 12;
  int n = 0;
  for (int w = 0; w < weeks; ++w) {
    Instant monday = at(2021, 3, 1) + std::chrono::days(7 * w);
    for (int j = 0; j <= w + 1; ++j) {
      std::string id = "c" + std::to_string(n++);
      corpus.conversations.push_back(fixtures::sized(id, 3, monday + std::chrono::hours(11 * j)));
      if (j <= w)
        ann[id] = {{"treatment", "medication"}, {}};
      else
        ann[id] = {{"logistics", "appointment"}, {}};
    }
  }
  auto hierarchy = default_topic_hierarchy();
  auto index = CrossFilterIndex::build(corpus, ann, fixtures::all_topic_ids(hierarchy));
  auto trend = weekly_trend(index, {}, hierarchy.parents());
  ASSERT_EQ(trend.weeks.size(), static_cast<std::size_t>(weeks));
  for (const auto& s : trend.series) {
    for (int w = 0; w < weeks; ++w) {
      std::size_t expected = s.topic_id == "treatment" ? w + 1 : s.topic_id == "logistics" ? 1 : 0;
      EXPECT_EQ(s.points[w].conversations, expected) << s.topic_id << " week " << w;
    }
  }
}

TEST(WeeklyTrend, ConservationOnRandomSelections) {
  fixtures::SelectionWorld f;
  auto resolver = f.resolver();
  auto parents = f.hierarchy.parents();
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    auto [sel, q] = fixtures::random_selection(rng, f);
    auto selected = apply_selection(f.index, sel, resolver);
    auto trend = weekly_trend(f.index, sel, parents, resolver);
    for (std::size_t w = 1; w < trend.weeks.size(); ++w) ASSERT_LT(trend.weeks[w - 1], trend.weeks[w]);
    for (const auto& s : trend.series) {
      std::size_t sum = 0;
      for (const auto& p : s.points) sum += p.conversations;
      ASSERT_EQ(sum, selected.intersect_count(*f.index.topic(s.topic_id))) << s.topic_id;
    }
  }
}
