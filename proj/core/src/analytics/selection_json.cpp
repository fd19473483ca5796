#include <json.hpp>

#include "convoscope/analytics/selection.hpp"
#include "convoscope/common/errors.hpp"

namespace convoscope {
namespace {

using json = nlohmann::json;
using Diagnostics = std::vector<SelectionError::Diagnostic>;

std::optional<std::vector<std::string>> string_array(const json& node, const std::string& field, Diagnostics& problems) {
  if (!node.is_array()) {
    problems.push_back({field, "expected an array of strings"});
    return std::nullopt;
  }
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) {
      problems.push_back({field, "expected an array of strings"});
      return std::nullopt;
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

FilterSelection parse_selection_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SelectionError("selection", std::string("malformed JSON: ") + e.what());
  }
  if (root.is_null()) return {};
  if (!root.is_object()) throw SelectionError("selection", "expected a JSON object");

  FilterSelection selection;
  Diagnostics problems;
  for (const auto& [key, value] : root.items()) {
    if (key == "facets") {
      if (!value.is_object()) {
        problems.push_back({"facets", "expected an object of facet -> values"});
        continue;
      }
      for (const auto& [facet, values] : value.items())
        if (auto list = string_array(values, "facets." + facet, problems))
          selection.facets[facet].insert(list->begin(), list->end());
    } else if (key == "topics") {
      if (auto list = string_array(value, "topics", problems)) selection.topics.insert(list->begin(), list->end());
    } else if (key == "time_range") {
      if (value.is_null()) continue;
      auto list = string_array(value, "time_range", problems);
      if (!list) continue;
      if (list->size() != 2) {
        problems.push_back({"time_range", "expected [start, end]"});
        continue;
      }
      try {
        selection.time_range = TimeRange{parse_iso8601((*list)[0]), parse_iso8601((*list)[1])};
        if (selection.time_range->start > selection.time_range->end)
          problems.push_back({"time_range", "start is after end"});
      } catch (const InvalidInputError& e) {
        problems.push_back({"time_range", e.what()});
      }
    } else if (key == "phrase") {
      if (value.is_null()) continue;
      if (!value.is_object() || !value.contains("text") || !value["text"].is_string()) {
        problems.push_back({"phrase", "expected {text, tau}"});
        continue;
      }
      PhraseConstraint phrase{value["text"].get<std::string>(), 0.6};
      if (value.contains("tau")) {
        if (!value["tau"].is_number()) {
          problems.push_back({"phrase.tau", "expected a number"});
          continue;
        }
        phrase.tau = value["tau"].get<double>();
      }
      if (!(phrase.tau > 0.0 && phrase.tau <= 1.0)) problems.push_back({"phrase.tau", "tau must lie in (0, 1]"});
      selection.phrase = std::move(phrase);
    } else {
      problems.push_back({key, "unknown selection field"});
    }
  }
  if (!problems.empty()) throw SelectionError(std::move(problems));
  return selection;
}

std::string selection_to_json(const FilterSelection& selection) {
  json root = json::object();
  json facets = json::object();
  for (const auto& [facet, values] : selection.facets) facets[facet] = std::vector<std::string>(values.begin(), values.end());
  root["facets"] = facets;
  root["topics"] = std::vector<std::string>(selection.topics.begin(), selection.topics.end());
  if (selection.time_range)
    root["time_range"] = {format_iso8601(selection.time_range->start), format_iso8601(selection.time_range->end)};
  if (selection.phrase) root["phrase"] = {{"text", selection.phrase->text}, {"tau", selection.phrase->tau}};
  return root.dump();
}

}  // namespace convoscope
