#pragma once

#include <chrono>
#include <string>

namespace efl {

// Calendar day, resolution one day. Ordered, hashable via time_since_epoch.
using Day = std::chrono::sys_days;

// "YYYY-MM-DD". Throws Error(Parse) on malformed or non-existent dates.
Day parse_date(const std::string& text);
std::string format_date(Day day);

// "YYYY-MM-DDTHH:MM", minute resolution, timezone-naive.
struct MinuteStamp {
  Day date{};
  int minute_of_day = 0; // [0, 1439]
};

MinuteStamp parse_timestamp(const std::string& text);
std::string format_timestamp(Day date, int minute_of_day);

} // namespace efl
