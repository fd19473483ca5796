#include "convoscope/ui/view_state.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "convoscope/common/errors.hpp"

namespace convoscope::ui {

namespace {

using Json = nlohmann::ordered_json;

std::string percent_encode(std::string_view text) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    if (i + 2 >= text.size()) throw InvalidInputError("truncated percent escape");
    int hi = hex_value(text[i + 1]);
    int lo = hex_value(text[i + 2]);
    if (hi < 0 || lo < 0) throw InvalidInputError("bad percent escape");
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

}  // namespace

ViewState clamp_focus(ViewState state, std::size_t columns) {
  state.focus_width = std::min(state.focus_width, columns);
  state.focus_start = std::min(state.focus_start, columns - state.focus_width);
  return state;
}

ColumnLayout layout_columns(std::size_t columns, std::size_t focus_start, std::size_t focus_width, double total_width,
                            double focus_column_width) {
  ViewState clamped;
  clamped.focus_start = focus_start;
  clamped.focus_width = focus_width;
  clamped = clamp_focus(clamped, columns);
  ColumnLayout layout;
  layout.focus_begin = clamped.focus_start;
  layout.focus_end = clamped.focus_start + clamped.focus_width;
  layout.widths.assign(columns, 0.0);
  if (columns == 0) return layout;

  const std::size_t focus = clamped.focus_width;
  const std::size_t context = columns - focus;
  double focus_w = focus_column_width;
  if (context == 0) {
    focus_w = total_width / static_cast<double>(focus);
  } else if (focus_w * static_cast<double>(focus) > total_width) {
    focus_w = total_width / static_cast<double>(columns);
  }
  double context_w = context == 0 ? 0.0 : (total_width - focus_w * static_cast<double>(focus)) / static_cast<double>(context);
  for (std::size_t i = 0; i < columns; ++i)
    layout.widths[i] = (i >= layout.focus_begin && i < layout.focus_end) ? focus_w : context_w;
  return layout;
}

std::string encode_view_state(const ViewState& state) {
  Json j;
  j["selection"] = Json::parse(selection_to_json(state.selection));
  j["focus"] = {state.focus_start, state.focus_width};
  j["active"] = state.active_conversation ? Json(*state.active_conversation) : Json(nullptr);
  j["trend"] = state.trend_view;
  j["validate"] = state.validate_mode;
  return percent_encode(j.dump());
}

ViewState decode_view_state(std::string_view fragment) {
  if (!fragment.empty() && fragment.front() == '#') fragment.remove_prefix(1);
  Json j = Json::parse(percent_decode(fragment), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InvalidInputError("view state is not a JSON object");
  ViewState state;
  try {
    if (j.contains("selection")) state.selection = parse_selection_json(j.at("selection").dump());
    if (j.contains("focus")) {
      const auto& f = j.at("focus");
      if (!f.is_array() || f.size() != 2) throw InvalidInputError("focus must be [start, width]");
      state.focus_start = f.at(0).get<std::size_t>();
      state.focus_width = f.at(1).get<std::size_t>();
    }
    if (j.contains("active") && !j.at("active").is_null())
      state.active_conversation = j.at("active").get<std::string>();
    state.trend_view = j.value("trend", false);
    state.validate_mode = j.value("validate", false);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("malformed view state: ") + e.what());
  } catch (const SelectionError& e) {
    throw InvalidInputError(std::string("malformed view state: ") + e.what());
  }
  return state;
}

std::string label_request_body(std::string_view conversation_id, std::string_view topic_id, bool displayed_prediction,
                               VerdictKind verdict, std::string_view annotator_id) {
  Json j;
  j["conversation_id"] = conversation_id;
  j["topic_id"] = topic_id;
  j["model_prediction"] = displayed_prediction ? "present" : "absent";
  j["verdict"] = to_string(verdict);
  j["annotator_id"] = annotator_id;
  return j.dump();
}

}  // namespace convoscope::ui
