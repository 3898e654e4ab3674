#include "simulator.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace efl {

namespace {

bool covers(int start, int end, int minute) {
  return minute >= start && minute <= end;
}

void check_interval(int start, int end, const ScenarioConfig& c,
                    const char* what) {
  if (start > end)
    throw Error(ErrorCode::Config, std::string(what) + " interval reversed");
  if (start < c.operate_from || end > c.operate_to)
    throw Error(ErrorCode::Config,
                std::string(what) + " interval outside the operating window");
}

} // namespace

void validate_scenario(const ScenarioConfig& config) {
  if (!(config.f_true_wh > 0.0))
    throw Error(ErrorCode::Config, "f_true must be positive");
  if (config.operate_from < 0 || config.operate_to >= kMinutesPerDay ||
      config.operate_from > config.operate_to)
    throw Error(ErrorCode::Config, "operating window out of range");
  if (config.thermal.amplitude_wh < 0.0 ||
      !(config.thermal.time_constant_min > 0.0))
    throw Error(ErrorCode::Config, "invalid thermal parameters");
  if (config.noise_std_wh < 0.0)
    throw Error(ErrorCode::Config, "noise std must be >= 0");
  for (const auto& w : config.waves) {
    check_interval(w.start_min, w.end_min, config, "passenger wave");
    if (w.mean_v_wh < 0.0 || w.std_v_wh < 0.0 || w.occupancy < 0.0 ||
        w.occupancy > 1.0)
      throw Error(ErrorCode::Config, "invalid passenger wave parameters");
  }
  for (const auto& s : config.saving) {
    check_interval(s.start_min, s.end_min, config, "saving");
    if (!(s.level_wh > 0.0) || s.level_wh >= config.f_true_wh)
      throw Error(ErrorCode::Config,
                  "saving level must be in (0, f_true)");
  }
  for (const auto& o : config.off)
    check_interval(o.start_min, o.end_min, config, "off");
}

GeneratedDay generate_day(const ScenarioConfig& config, Day date) {
  validate_scenario(config);
  Rng rng(config.seed);

  GeneratedDay out;
  out.f_true_wh = config.f_true_wh;
  DailyProfile& p = out.profile;
  p.escalator_id = config.escalator_id;
  p.day = date;
  p.direction = config.direction;
  p.samples.reserve(kMinutesPerDay);

  int run_start = -1;
  for (int m = 0; m < kMinutesPerDay; ++m) {
    bool off = !covers(config.operate_from, config.operate_to, m);
    for (const auto& o : config.off)
      off = off || covers(o.start_min, o.end_min, m);
    if (off) {
      p.samples.push_back({m, 0.0});
      run_start = -1;
      continue;
    }
    if (run_start < 0)
      run_start = m;

    const SavingInterval* saving = nullptr;
    for (const auto& s : config.saving)
      if (covers(s.start_min, s.end_min, m))
        saving = &s;

    double e;
    if (saving) {
      e = saving->level_wh;
    } else {
      e = config.f_true_wh +
          config.thermal.amplitude_wh *
              std::exp(-double(m - run_start) / config.thermal.time_constant_min);
      for (const auto& w : config.waves) {
        if (!covers(w.start_min, w.end_min, m))
          continue;
        if (rng.bernoulli(w.occupancy)) {
          const double load = std::max(0.0, rng.normal(w.mean_v_wh, w.std_v_wh));
          e += config.direction == Direction::Up ? load : -load;
        }
      }
    }
    e += rng.normal(0.0, config.noise_std_wh);
    if (e < 0.0) {
      e = 0.0;
      ++out.clipped_minutes;
    }
    p.samples.push_back({m, e});
  }
  p = detect_operating_mask(p);
  return out;
}

GeneratedSeries generate_series(const SeriesConfig& config) {
  if (config.days < 1)
    throw Error(ErrorCode::Config, "series needs >= 1 day");
  for (const auto& s : config.shifts)
    if (s.day_index < 1 || s.day_index > config.days)
      throw Error(ErrorCode::Config, "shift day outside the series");
  for (const auto& m : config.maintenance)
    if (m.day_index < 1 || m.day_index > config.days)
      throw Error(ErrorCode::Config, "maintenance day outside the series");

  GeneratedSeries out;
  out.profiles.reserve(size_t(config.days));
  for (int d = 1; d <= config.days; ++d) {
    ScenarioConfig day_cfg = config.base;
    for (const auto& s : config.shifts)
      if (s.day_index <= d)
        day_cfg.f_true_wh = s.f_true_wh;
    for (const auto& m : config.maintenance)
      if (m.day_index <= d)
        day_cfg.f_true_wh = m.post_level_wh;
    day_cfg.seed = fnv1a64_pair(config.base.seed, std::uint64_t(d));

    const Day date = config.start_day + std::chrono::days{d - 1};
    GeneratedDay day = generate_day(day_cfg, date);
    out.clipped_minutes += day.clipped_minutes;
    out.truth.emplace_back(date, day.f_true_wh);
    out.profiles.push_back(std::move(day.profile));
  }
  return out;
}

std::vector<std::string> scenario_preset_names() {
  return {"busy-last-hour", "energy-saving", "multi-startup", "maintenance"};
}

SeriesConfig scenario_preset(const std::string& name) {
  SeriesConfig series;
  ScenarioConfig& c = series.base;
  c.noise_std_wh = 0.3;

  if (name == "busy-last-hour") {
    // Passengers ride until closing, so the final operating hour never goes
    // vacant.
    c.escalator_id = "sim-busy";
    c.direction = Direction::Up;
    c.f_true_wh = 45.0;
    c.thermal = {10.0, 20.0};
    c.waves = {{180, 300, 6.0, 2.0, 0.5},
               {301, 1139, 5.0, 2.0, 0.15},
               {1140, 1260, 8.0, 2.0, 0.95}};
    c.seed = 101;
  } else if (name == "energy-saving") {
    // The unit drops to a reduced level when idle, including the last hours.
    c.escalator_id = "sim-saving";
    c.direction = Direction::Down;
    c.f_true_wh = 45.0;
    c.thermal = {8.0, 15.0};
    c.waves = {{180, 300, 6.0, 2.0, 0.4}, {301, 1099, 5.0, 2.0, 0.15}};
    c.saving = {{700, 800, 30.0}, {900, 1000, 30.0}, {1100, 1260, 30.0}};
    c.seed = 102;
  } else if (name == "multi-startup") {
    // Manually stopped and restarted twice; each restart warms up again.
    c.escalator_id = "sim-restart";
    c.direction = Direction::Down;
    c.f_true_wh = 50.0;
    c.thermal = {10.0, 15.0};
    c.waves = {{180, 300, 5.0, 2.0, 0.3}, {900, 1200, 5.0, 2.0, 0.3}};
    c.off = {{400, 460}, {800, 860}};
    c.seed = 103;
  } else if (name == "maintenance") {
    // A mid-day maintenance visit: short on/off toggles with low-level
    // jogging in between.
    c.escalator_id = "sim-maint";
    c.direction = Direction::Up;
    c.f_true_wh = 40.0;
    c.thermal = {8.0, 15.0};
    c.waves = {{180, 300, 6.0, 2.0, 0.4}, {700, 1100, 5.0, 2.0, 0.2}};
    c.off = {{600, 609}, {620, 629}, {640, 649}};
    c.saving = {{610, 619, 15.0}, {630, 639, 15.0}, {650, 659, 15.0}};
    c.seed = 104;
  } else {
    throw Error(ErrorCode::Config, "unknown scenario preset: '" + name + "'");
  }
  return series;
}

namespace {

using nlohmann::json;

int json_minute(const json& j, const char* key) {
  if (!j.contains(key))
    throw Error(ErrorCode::Config,
                std::string("scenario: missing field '") + key + "'");
  return j.at(key).get<int>();
}

} // namespace

SeriesConfig series_config_from_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("scenario JSON: ") + e.what());
  }

  try {
    SeriesConfig series;
    ScenarioConfig& c = series.base;
    if (doc.contains("preset")) {
      series = scenario_preset(doc.at("preset").get<std::string>());
    }
    if (doc.contains("escalator_id"))
      c.escalator_id = doc.at("escalator_id").get<std::string>();
    if (doc.contains("direction"))
      c.direction = direction_from_name(doc.at("direction").get<std::string>());
    if (doc.contains("f_true_wh"))
      c.f_true_wh = doc.at("f_true_wh").get<double>();
    if (doc.contains("operate_from"))
      c.operate_from = doc.at("operate_from").get<int>();
    if (doc.contains("operate_to"))
      c.operate_to = doc.at("operate_to").get<int>();
    if (doc.contains("thermal")) {
      const auto& t = doc.at("thermal");
      c.thermal.amplitude_wh = t.value("amplitude_wh", 0.0);
      c.thermal.time_constant_min = t.value("time_constant_min", 1.0);
    }
    if (doc.contains("passenger_waves")) {
      c.waves.clear();
      for (const auto& w : doc.at("passenger_waves"))
        c.waves.push_back({json_minute(w, "start_min"), json_minute(w, "end_min"),
                           w.value("mean_v_wh", 0.0), w.value("std_v_wh", 0.0),
                           w.value("occupancy", 0.0)});
    }
    if (doc.contains("saving_intervals")) {
      c.saving.clear();
      for (const auto& s : doc.at("saving_intervals"))
        c.saving.push_back({json_minute(s, "start_min"),
                            json_minute(s, "end_min"),
                            s.value("level_wh", 0.0)});
    }
    if (doc.contains("off_intervals")) {
      c.off.clear();
      for (const auto& o : doc.at("off_intervals"))
        c.off.push_back(
            {json_minute(o, "start_min"), json_minute(o, "end_min")});
    }
    if (doc.contains("noise_std_wh"))
      c.noise_std_wh = doc.at("noise_std_wh").get<double>();
    if (doc.contains("seed"))
      c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("days"))
      series.days = doc.at("days").get<int>();
    if (doc.contains("start_day"))
      series.start_day = parse_date(doc.at("start_day").get<std::string>());
    if (doc.contains("shifts")) {
      for (const auto& s : doc.at("shifts"))
        series.shifts.push_back(
            {s.at("day").get<int>(), s.at("f_true_wh").get<double>()});
    }
    if (doc.contains("maintenance_days")) {
      for (const auto& m : doc.at("maintenance_days"))
        series.maintenance.push_back(
            {m.at("day").get<int>(), m.at("post_level_wh").get<double>()});
    }
    validate_scenario(c);
    return series;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, std::string("scenario JSON: ") + e.what());
  }
}

} // namespace efl
