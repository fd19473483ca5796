#include "convoscope/analytics/selection.hpp"

#include "convoscope/common/errors.hpp"
#include "convoscope/common/text.hpp"

namespace convoscope {

bool FilterSelection::empty() const {
  for (const auto& [facet, values] : facets)
    if (!values.empty()) return false;
  return topics.empty() && !time_range && !phrase;
}

void validate_selection(const FilterSelection& selection, const CrossFilterIndex& index) {
  std::vector<SelectionError::Diagnostic> problems;
  for (const auto& [facet, values] : selection.facets) {
    if (index.facet(facet) == nullptr) {
      problems.push_back({"facets." + facet, "unknown facet"});
      continue;
    }
    for (const auto& value : values)
      if (index.facet_value(facet, value) == nullptr)
        problems.push_back({"facets." + facet, "unknown value '" + value + "'"});
  }
  for (const auto& topic : selection.topics)
    if (index.topic(topic) == nullptr) problems.push_back({"topics", "unknown topic '" + topic + "'"});
  if (selection.time_range && selection.time_range->start > selection.time_range->end)
    problems.push_back({"time_range", "start is after end"});
  if (selection.phrase) {
    if (trim(selection.phrase->text).empty()) problems.push_back({"phrase.text", "empty phrase"});
    if (!(selection.phrase->tau > 0.0 && selection.phrase->tau <= 1.0))
      problems.push_back({"phrase.tau", "tau must lie in (0, 1]"});
  }
  if (!problems.empty()) throw SelectionError(std::move(problems));
}

Bitset apply_selection(const CrossFilterIndex& index, const FilterSelection& selection,
                       const PhraseResolver& resolver, const SelectionExclusion& exclude) {
  Bitset result = Bitset::full(index.universe());
  for (const auto& [facet, values] : selection.facets) {
    if (values.empty() || (exclude.facet && *exclude.facet == facet)) continue;
    Bitset any(index.universe());
    for (const auto& value : values)
      if (const Bitset* members = index.facet_value(facet, value)) any |= *members;
    result &= any;
  }
  if (!exclude.topics) {
    for (const auto& topic : selection.topics) {
      const Bitset* members = index.topic(topic);
      if (members == nullptr) return Bitset(index.universe());
      result &= *members;
    }
  }
  if (selection.time_range) result &= index.time_range(selection.time_range->start, selection.time_range->end);
  if (selection.phrase) {
    if (!resolver) throw InvalidInputError("selection has a phrase constraint but no phrase resolver");
    result &= resolver(*selection.phrase);
  }
  return result;
}

}  // namespace convoscope
