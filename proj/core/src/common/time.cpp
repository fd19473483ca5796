#include "convoscope/common/time.hpp"

#include <charconv>
#include <cstdio>

#include "convoscope/common/errors.hpp"

namespace convoscope {
namespace {

using namespace std::chrono;

int read_int(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) throw InvalidInputError("truncated timestamp '" + std::string(text) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw InvalidInputError("malformed timestamp '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c)
    throw InvalidInputError("malformed timestamp '" + std::string(text) + "'");
}

}  // namespace

Instant parse_iso8601(std::string_view text) {
  int y = read_int(text, 0, 4);
  expect(text, 4, '-');
  int mo = read_int(text, 5, 2);
  expect(text, 7, '-');
  int d = read_int(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' '))
    throw InvalidInputError("malformed timestamp '" + std::string(text) + "'");
  int h = read_int(text, 11, 2);
  expect(text, 13, ':');
  int mi = read_int(text, 14, 2);
  expect(text, 16, ':');
  int s = read_int(text, 17, 2);

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  int offset_minutes = 0;
  if (pos < text.size()) {
    char zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
      ++pos;
    } else if (zone == '+' || zone == '-') {
      int oh = read_int(text, pos + 1, 2);
      expect(text, pos + 3, ':');
      int om = read_int(text, pos + 4, 2);
      offset_minutes = (zone == '+' ? 1 : -1) * (oh * 60 + om);
      pos += 6;
    }
  }
  if (pos != text.size()) throw InvalidInputError("trailing characters in timestamp '" + std::string(text) + "'");

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60)
    throw InvalidInputError("out-of-range timestamp '" + std::string(text) + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

std::string format_iso8601(Instant instant) {
  auto day_point = floor<days>(instant);
  year_month_day ymd{day_point};
  hh_mm_ss hms{instant - day_point};
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buffer;
}

IsoWeek iso_week_of(Instant instant) {
  sys_days day_point = floor<days>(instant);
  // The ISO week belongs to the year containing its Thursday.
  weekday wd{day_point};
  int iso_index = static_cast<int>(wd.iso_encoding()) - 1;  // Monday = 0
  sys_days thursday = day_point - days{iso_index} + days{3};
  year_month_day thursday_ymd{thursday};
  sys_days jan1 = sys_days{thursday_ymd.year() / January / 1};
  auto ordinal = (thursday - jan1).count();
  return IsoWeek{static_cast<int>(thursday_ymd.year()), static_cast<unsigned>(ordinal / 7 + 1)};
}

Instant iso_week_start(IsoWeek week) {
  // January 4th always lies in ISO week 1.
  sys_days jan4 = sys_days{year{week.year} / January / 4};
  int iso_index = static_cast<int>(weekday{jan4}.iso_encoding()) - 1;
  sys_days week1_monday = jan4 - days{iso_index};
  return Instant{week1_monday + days{7 * (static_cast<int>(week.week) - 1)}};
}

IsoWeek next_iso_week(IsoWeek week) {
  return iso_week_of(iso_week_start(week) + days{7});
}

std::string to_string(IsoWeek week) {
  char buffer[16];
  std::snprintf(buffer, sizeof buffer, "%04d-W%02u", week.year, week.week);
  return buffer;
}

}  // namespace convoscope
