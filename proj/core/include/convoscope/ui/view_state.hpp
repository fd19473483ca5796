#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "convoscope/analytics/selection.hpp"
#include "convoscope/service/verdicts.hpp"

namespace convoscope::ui {

inline constexpr std::size_t kDefaultFocusWidth = 50;

// Client-side state of the explorer views.
struct ViewState {
  FilterSelection selection;
  std::size_t focus_start = 0;
  std::size_t focus_width = kDefaultFocusWidth;
  std::optional<std::string> active_conversation;
  bool trend_view = false;
  bool validate_mode = false;

  bool operator==(const ViewState&) const = default;
};

// Shrinks the focus window to at most `columns` and moves it inside [0, columns].
ViewState clamp_focus(ViewState state, std::size_t columns);

struct ColumnLayout {
  std::vector<double> widths;  // one per column
  std::size_t focus_begin = 0;
  std::size_t focus_end = 0;  // exclusive
};

// Focus columns get `focus_column_width` each (less when they would not fit);
// context columns on both sides share the remaining width equally. Every
// column is laid out, so widths.size() == columns.
ColumnLayout layout_columns(std::size_t columns, std::size_t focus_start, std::size_t focus_width, double total_width,
                            double focus_column_width);

// URL-fragment encoding (percent-encoded JSON). decode throws InvalidInputError.
std::string encode_view_state(const ViewState& state);
ViewState decode_view_state(std::string_view fragment);

// POST /labels body for a verdict on the prediction currently displayed.
std::string label_request_body(std::string_view conversation_id, std::string_view topic_id, bool displayed_prediction,
                               VerdictKind verdict, std::string_view annotator_id);

}  // namespace convoscope::ui
