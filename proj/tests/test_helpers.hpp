#pragma once

#include <random>
#include <string>
#include <vector>

#include "io.hpp"
#include "profile.hpp"

namespace efl::test {

// Profile with samples at minutes start, start+1, ... and a threshold-derived
// operating mask.
inline DailyProfile make_profile(const std::vector<double>& energies,
                                 Direction direction = Direction::Up,
                                 int start_minute = 0,
                                 const std::string& id = "esc-1") {
  DailyProfile p;
  p.escalator_id = id;
  p.day = parse_date("2021-06-01");
  p.direction = direction;
  for (size_t i = 0; i < energies.size(); ++i)
    p.samples.push_back({start_minute + int(i), energies[i]});
  return detect_operating_mask(p);
}

inline std::string profile_csv_line(const std::string& id,
                                    const std::string& stamp,
                                    const std::string& dir, double energy) {
  return id + "," + stamp + "," + dir + "," + format_double(energy) + "\n";
}

} // namespace efl::test
