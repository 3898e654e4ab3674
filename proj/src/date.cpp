#include "date.hpp"

#include <cstdio>

#include "error.hpp"

namespace efl {

namespace {

Day make_day(int y, unsigned m, unsigned d, const std::string& text) {
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                  std::chrono::day{d}};
  if (!ymd.ok())
    throw Error(ErrorCode::Parse, "invalid calendar date: '" + text + "'");
  return Day{ymd};
}

} // namespace

Day parse_date(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3 ||
      text.size() != 10)
    throw Error(ErrorCode::Parse, "expected YYYY-MM-DD, got '" + text + "'");
  return make_day(y, m, d, text);
}

std::string format_date(Day day) {
  std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

MinuteStamp parse_timestamp(const std::string& text) {
  int y = 0;
  unsigned m = 0, d = 0, hh = 0, mm = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%4d-%2u-%2uT%2u:%2u%c", &y, &m, &d, &hh, &mm,
                  &tail) != 5 ||
      text.size() != 16)
    throw Error(ErrorCode::Parse,
                "expected YYYY-MM-DDTHH:MM, got '" + text + "'");
  if (hh > 23 || mm > 59)
    throw Error(ErrorCode::Parse, "invalid time of day: '" + text + "'");
  return MinuteStamp{make_day(y, m, d, text), int(hh * 60 + mm)};
}

std::string format_timestamp(Day date, int minute_of_day) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%sT%02d:%02d", format_date(date).c_str(),
                minute_of_day / 60, minute_of_day % 60);
  return buf;
}

} // namespace efl
