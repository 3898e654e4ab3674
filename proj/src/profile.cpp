#include "profile.hpp"

#include <cmath>

#include "error.hpp"

namespace efl {

const char* direction_name(Direction d) {
  return d == Direction::Up ? "up" : "down";
}

Direction direction_from_name(const std::string& name) {
  if (name == "up" || name == "Up" || name == "UP")
    return Direction::Up;
  if (name == "down" || name == "Down" || name == "DOWN")
    return Direction::Down;
  throw Error(ErrorCode::Parse, "unknown direction: '" + name + "'");
}

std::vector<double> DailyProfile::operating_energies() const {
  std::vector<double> out;
  out.reserve(size_t(n_operating));
  for (size_t i = 0; i < samples.size(); ++i)
    if (operating[i])
      out.push_back(samples[i].energy_wh);
  return out;
}

void validate_profile(const DailyProfile& profile) {
  const auto& s = profile.samples;
  if (profile.operating.size() != s.size())
    throw Error(ErrorCode::Validation,
                "operating mask size differs from sample count");
  int on = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i].minute < 0 || s[i].minute >= kMinutesPerDay)
      throw Error(ErrorCode::Validation, "sample minute out of [0, 1439]");
    if (i > 0 && s[i].minute <= s[i - 1].minute)
      throw Error(ErrorCode::Validation,
                  "samples not strictly ascending by minute");
    if (!(s[i].energy_wh >= 0.0) || !std::isfinite(s[i].energy_wh))
      throw Error(ErrorCode::Validation, "negative or non-finite energy");
    if (profile.operating[i])
      ++on;
  }
  if (on != profile.n_operating)
    throw Error(ErrorCode::Validation,
                "n_operating does not match the operating mask");
  if (profile.n_operating >= kMinutesPerDay)
    throw Error(ErrorCode::Validation,
                "escalator operating all 1440 minutes of " +
                    format_date(profile.day) + " (" + profile.escalator_id +
                    "): a working day must contain an off period");
}

DailyProfile detect_operating_mask(const DailyProfile& profile,
                                   double off_threshold_wh) {
  if (!(off_threshold_wh > 0.0))
    throw Error(ErrorCode::Config, "off threshold must be positive");
  DailyProfile out = profile;
  out.operating.assign(out.samples.size(), false);
  out.n_operating = 0;
  for (size_t i = 0; i < out.samples.size(); ++i) {
    if (out.samples[i].energy_wh >= off_threshold_wh) {
      out.operating[i] = true;
      ++out.n_operating;
    }
  }
  validate_profile(out);
  return out;
}

std::vector<OperatingRun> operating_runs(const DailyProfile& profile) {
  std::vector<OperatingRun> runs;
  bool open = false;
  int run_start = 0, prev_minute = 0;
  for (size_t i = 0; i < profile.samples.size(); ++i) {
    const int minute = profile.samples[i].minute;
    const bool on = profile.operating[i];
    if (on) {
      if (!open || minute != prev_minute + 1) {
        if (open)
          runs.push_back({run_start, prev_minute});
        run_start = minute;
        open = true;
      }
      prev_minute = minute;
    } else if (open) {
      runs.push_back({run_start, prev_minute});
      open = false;
    }
  }
  if (open)
    runs.push_back({run_start, prev_minute});
  return runs;
}

} // namespace efl
