#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "convoscope/analytics/bitset.hpp"
#include "convoscope/analytics/index.hpp"
#include "convoscope/common/time.hpp"

namespace convoscope {

struct TimeRange {
  Instant start{};
  Instant end{};  // inclusive

  bool operator==(const TimeRange&) const = default;
};

struct PhraseConstraint {
  std::string text;
  double tau = 0.6;

  bool operator==(const PhraseConstraint&) const = default;
};

// Conjunction of constraints: values OR'ed within one facet, AND across
// facets; every selected topic must be present; start time within the
// range; phrase matches. Empty means no constraint.
struct FilterSelection {
  std::map<std::string, std::set<std::string>> facets;
  std::set<std::string> topics;
  std::optional<TimeRange> time_range;
  std::optional<PhraseConstraint> phrase;

  bool empty() const;

  bool operator==(const FilterSelection&) const = default;
};

// Resolves a phrase constraint to the matching conversation positions.
using PhraseResolver = std::function<Bitset(const PhraseConstraint&)>;

// Throws SelectionError listing every invalid field: unknown facet or value,
// unknown topic, reversed time range, tau outside (0, 1], empty phrase.
void validate_selection(const FilterSelection& selection, const CrossFilterIndex& index);

// Which constraints to leave out when computing a base set.
struct SelectionExclusion {
  std::optional<std::string> facet;
  bool topics = false;
};

// Throws InvalidInputError when the selection has a phrase but no resolver
// is supplied.
Bitset apply_selection(const CrossFilterIndex& index, const FilterSelection& selection,
                       const PhraseResolver& resolver = {}, const SelectionExclusion& exclude = {});

// JSON wire format:
//   {"facets": {name: [values]}, "topics": [ids], "time_range": [start, end],
//    "phrase": {"text": ..., "tau": ...}}
// Every key is optional. Throws SelectionError on malformed input.
FilterSelection parse_selection_json(std::string_view json);
std::string selection_to_json(const FilterSelection& selection);

}  // namespace convoscope
