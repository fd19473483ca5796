#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace convoscope {

// UTC instant at one-second precision.
using Instant = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z", "+hh:mm" or "-hh:mm"
// (a missing zone designator means UTC). Fractional seconds are truncated.
// Throws InvalidInputError on malformed input.
Instant parse_iso8601(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Instant instant);

struct IsoWeek {
  int year = 0;
  unsigned week = 0;  // 1..53

  auto operator<=>(const IsoWeek&) const = default;
};

IsoWeek iso_week_of(Instant instant);
// Monday 00:00:00 UTC of the given ISO week.
Instant iso_week_start(IsoWeek week);
IsoWeek next_iso_week(IsoWeek week);
// "2021-W05"
std::string to_string(IsoWeek week);

}  // namespace convoscope
