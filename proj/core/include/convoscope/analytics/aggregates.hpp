#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "convoscope/analytics/index.hpp"
#include "convoscope/analytics/selection.hpp"
#include "convoscope/common/time.hpp"
#include "convoscope/sentiment/scoring.hpp"

namespace convoscope {

struct ValueProportion {
  std::string value;
  std::size_t total = 0;    // base set (selection without this facet's own constraint) with this value
  std::size_t matched = 0;  // full selection with this value
};

struct FacetProportion {
  std::string facet;
  std::vector<ValueProportion> values;
};

using FacetProportions = std::vector<FacetProportion>;

FacetProportions facet_proportions(const CrossFilterIndex& index, const FilterSelection& selection,
                                   const PhraseResolver& resolver = {});

struct TopicProportion {
  std::string topic_id;
  std::size_t total = 0;  // base set (selection without topic constraints) carrying the topic
  std::size_t matched = 0;
  SentimentBinCounts sentiment_bins{};  // message bins over the matched conversations
};

std::vector<TopicProportion> topic_proportions(const CrossFilterIndex& index, const FilterSelection& selection,
                                               const PhraseResolver& resolver = {});

struct TrendPoint {
  std::size_t conversations = 0;
  SentimentBinCounts sentiment_bins{};
};

struct TopicTrend {
  std::string topic_id;
  std::vector<TrendPoint> points;  // aligned with TrendSeries::weeks
};

struct TrendSeries {
  std::vector<IsoWeek> weeks;  // every week from the first to the last selected conversation
  std::vector<TopicTrend> series;
};

// Weekly (ISO-8601, UTC) counts of selected conversations per topic.
TrendSeries weekly_trend(const CrossFilterIndex& index, const FilterSelection& selection,
                         std::span<const std::string> group_topics, const PhraseResolver& resolver = {});

}  // namespace convoscope
