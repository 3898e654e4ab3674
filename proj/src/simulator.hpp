#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "profile.hpp"

namespace efl {

// Elevated consumption after startup that decays toward the fixed loss:
// amplitude * exp(-minutes_since_run_start / time_constant). Each restart
// re-triggers it.
struct ThermalConfig {
  double amplitude_wh = 0.0;
  double time_constant_min = 1.0;
};

// Passenger traffic over [start_min, end_min] (inclusive): each covered
// minute is occupied with probability `occupancy`; an occupied minute draws a
// load from N(mean_v_wh, std_v_wh^2) truncated at 0, added for up and
// subtracted for down.
struct PassengerWave {
  int start_min = 0;
  int end_min = 0;
  double mean_v_wh = 0.0;
  double std_v_wh = 0.0;
  double occupancy = 0.0;
};

// While active, the unit runs at a reduced flat level (energy-saving mode or
// maintenance jogging) instead of the fixed loss.
struct SavingInterval {
  int start_min = 0;
  int end_min = 0;
  double level_wh = 0.0;
};

struct MinuteInterval {
  int start_min = 0;
  int end_min = 0;
};

// Generative description of one synthetic working day with known true fixed
// loss. All minute intervals are inclusive.
struct ScenarioConfig {
  std::string escalator_id = "sim";
  Direction direction = Direction::Up;
  double f_true_wh = 45.0;
  int operate_from = 90;  // 05:30 on the default 04:00 boundary
  int operate_to = 1260;  // 01:00
  ThermalConfig thermal;
  std::vector<PassengerWave> waves;
  std::vector<SavingInterval> saving;
  std::vector<MinuteInterval> off; // mid-day stops (multi-startup, maintenance)
  double noise_std_wh = 0.0;
  std::uint64_t seed = 0;
};

struct SeriesShift {
  int day_index = 1; // 1-based day number
  double f_true_wh = 0.0;
};

struct MaintenanceDay {
  int day_index = 1;
  double post_level_wh = 0.0; // fixed loss from this day onward
};

struct SeriesConfig {
  ScenarioConfig base;
  int days = 1;
  Day start_day = parse_date("2021-01-01");
  std::vector<SeriesShift> shifts;
  std::vector<MaintenanceDay> maintenance;
};

struct GeneratedDay {
  DailyProfile profile;
  double f_true_wh = 0.0;
  int clipped_minutes = 0; // energies clipped at 0; nonzero means a bad config
};

struct GeneratedSeries {
  std::vector<DailyProfile> profiles;
  std::vector<std::pair<Day, double>> truth;
  long clipped_minutes = 0;
};

// Emits a full 1440-minute profile: off minutes read exactly 0 Wh, operating
// minutes follow the scenario. Deterministic for a given config.
GeneratedDay generate_day(const ScenarioConfig& config, Day date);

// Day d (1-based) uses seed fnv1a64(base seed, d) and the f_true in force
// after all shifts/maintenance up to and including day d.
GeneratedSeries generate_series(const SeriesConfig& config);

// The four bundled operating scenarios: busy-last-hour, energy-saving,
// multi-startup, maintenance.
std::vector<std::string> scenario_preset_names();
SeriesConfig scenario_preset(const std::string& name);

// JSON document: scenario fields plus optional days/start_day/shifts/
// maintenance_days. Schema documented in the README.
SeriesConfig series_config_from_json(std::istream& in);

void validate_scenario(const ScenarioConfig& config);

} // namespace efl
