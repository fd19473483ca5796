#include "convoscope/analytics/aggregates.hpp"

#include <algorithm>

namespace convoscope {

FacetProportions facet_proportions(const CrossFilterIndex& index, const FilterSelection& selection,
                                   const PhraseResolver& resolver) {
  const Bitset full = apply_selection(index, selection, resolver);
  FacetProportions out;
  for (const auto& facet : index.facets()) {
    auto own = selection.facets.find(facet.name);
    const bool constrained = own != selection.facets.end() && !own->second.empty();
    const Bitset base = constrained ? apply_selection(index, selection, resolver, {facet.name, false}) : full;
    FacetProportion proportion{facet.name, {}};
    for (std::size_t v = 0; v < facet.values.size(); ++v)
      proportion.values.push_back(
          {facet.values[v], base.intersect_count(facet.members[v]), full.intersect_count(facet.members[v])});
    out.push_back(std::move(proportion));
  }
  return out;
}

std::vector<TopicProportion> topic_proportions(const CrossFilterIndex& index, const FilterSelection& selection,
                                               const PhraseResolver& resolver) {
  const Bitset full = apply_selection(index, selection, resolver);
  const Bitset base =
      selection.topics.empty() ? full : apply_selection(index, selection, resolver, {std::nullopt, true});
  std::vector<TopicProportion> out;
  for (const auto& topic_id : index.topic_ids()) {
    const Bitset& members = *index.topic(topic_id);
    TopicProportion proportion;
    proportion.topic_id = topic_id;
    proportion.total = base.intersect_count(members);
    Bitset matched = full & members;
    proportion.matched = matched.count();
    matched.for_each([&](std::size_t pos) {
      const auto& bins = index.sentiment_bins(pos);
      for (std::size_t b = 0; b < bins.size(); ++b) proportion.sentiment_bins[b] += bins[b];
    });
    out.push_back(std::move(proportion));
  }
  return out;
}

TrendSeries weekly_trend(const CrossFilterIndex& index, const FilterSelection& selection,
                         std::span<const std::string> group_topics, const PhraseResolver& resolver) {
  const Bitset selected = apply_selection(index, selection, resolver);
  TrendSeries out;
  for (const auto& topic : group_topics) out.series.push_back({topic, {}});
  if (selected.none()) return out;

  std::optional<IsoWeek> first, last;
  selected.for_each([&](std::size_t pos) {
    IsoWeek week = iso_week_of(index.start_time(pos));
    if (!first || week < *first) first = week;
    if (!last || week > *last) last = week;
  });
  for (IsoWeek week = *first; week <= *last; week = next_iso_week(week)) out.weeks.push_back(week);
  for (auto& series : out.series) series.points.assign(out.weeks.size(), {});

  for (std::size_t s = 0; s < group_topics.size(); ++s) {
    const Bitset* members = index.topic(group_topics[s]);
    if (members == nullptr) continue;
    (selected & *members).for_each([&](std::size_t pos) {
      IsoWeek week = iso_week_of(index.start_time(pos));
      auto slot = static_cast<std::size_t>(std::lower_bound(out.weeks.begin(), out.weeks.end(), week) - out.weeks.begin());
      TrendPoint& point = out.series[s].points[slot];
      ++point.conversations;
      const auto& bins = index.sentiment_bins(pos);
      for (std::size_t b = 0; b < bins.size(); ++b) point.sentiment_bins[b] += bins[b];
    });
  }
  return out;
}

}  // namespace convoscope
