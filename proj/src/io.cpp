#include "io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace efl {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Splits one CSV line; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"')
      out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

double parse_double_field(const std::string& text, size_t line_no,
                          const char* what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw Error(ErrorCode::Parse, std::string("line ") +
                                      std::to_string(line_no) + ": bad " +
                                      what + " '" + text + "'");
  return v;
}

[[noreturn]] void parse_fail(size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::Parse,
              "line " + std::to_string(line_no) + ": " + msg);
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line))
    return false;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  return true;
}

const char* const kProfileHeader = "escalator_id,timestamp,direction,energy_wh";
const char* const kSeriesHeader = "escalator_id,day,f_t_wh";
const char* const kMaintenanceHeader = "escalator_id,day,note";
const char* const kEstimatesHeader =
    "escalator_id,day,method,value_wh,delta_wh,grid_resolution_wh,subset_pct,"
    "window_minutes,objective,interval_lo_wh,interval_hi_wh,samples_used,error";

} // namespace

std::string format_double(double value) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value)
      return buf;
  }
  return buf;
}

std::vector<DailyProfile> ingest_csv(std::istream& in,
                                     const IngestOptions& options) {
  if (options.day_boundary_minute < 0 ||
      options.day_boundary_minute >= kMinutesPerDay)
    throw Error(ErrorCode::Config, "day boundary out of range");

  std::string line;
  if (!next_line(in, line) || trim(line) != kProfileHeader)
    throw Error(ErrorCode::Parse,
                std::string("expected header '") + kProfileHeader + "'");

  struct Group {
    Direction direction = Direction::Up;
    std::vector<EnergySample> samples;
  };
  std::map<std::pair<std::string, Day>, Group> groups;
  std::set<std::tuple<std::string, Day, int>> seen;

  size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_csv(line);
    if (fields.size() != 4)
      parse_fail(line_no, "expected 4 fields, got " +
                              std::to_string(fields.size()));
    MinuteStamp stamp;
    Direction dir;
    try {
      stamp = parse_timestamp(fields[1]);
      dir = direction_from_name(fields[2]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    const double energy = parse_double_field(fields[3], line_no, "energy");
    if (energy < 0.0)
      throw Error(ErrorCode::Validation,
                  "line " + std::to_string(line_no) + ": negative energy");

    // Fold the timestamp into its working day.
    int minute = stamp.minute_of_day - options.day_boundary_minute;
    Day day = stamp.date;
    if (minute < 0) {
      minute += kMinutesPerDay;
      day -= std::chrono::days{1};
    }
    if (!seen.insert({fields[0], stamp.date, stamp.minute_of_day}).second)
      throw Error(ErrorCode::Validation,
                  "line " + std::to_string(line_no) + ": duplicate reading " +
                      fields[0] + " " + fields[1]);

    auto [it, inserted] = groups.try_emplace({fields[0], day});
    if (inserted)
      it->second.direction = dir;
    else if (it->second.direction != dir)
      throw Error(ErrorCode::Validation,
                  "line " + std::to_string(line_no) +
                      ": direction changes within a working day");
    it->second.samples.push_back({minute, energy});
  }

  std::vector<DailyProfile> profiles;
  profiles.reserve(groups.size());
  for (auto& [key, group] : groups) {
    DailyProfile p;
    p.escalator_id = key.first;
    p.day = key.second;
    p.direction = group.direction;
    std::sort(group.samples.begin(), group.samples.end(),
              [](const EnergySample& a, const EnergySample& b) {
                return a.minute < b.minute;
              });
    p.samples = std::move(group.samples);
    profiles.push_back(detect_operating_mask(p, options.off_threshold_wh));
  }
  return profiles;
}

void write_profiles_csv(std::ostream& out,
                        const std::vector<DailyProfile>& profiles,
                        const IngestOptions& options) {
  out << kProfileHeader << "\n";
  for (const auto& p : profiles) {
    for (const auto& s : p.samples) {
      int tod = options.day_boundary_minute + s.minute;
      Day date = p.day;
      if (tod >= kMinutesPerDay) {
        tod -= kMinutesPerDay;
        date += std::chrono::days{1};
      }
      out << csv_quote(p.escalator_id) << ',' << format_timestamp(date, tod)
          << ',' << direction_name(p.direction) << ','
          << format_double(s.energy_wh) << "\n";
    }
  }
}

namespace {

std::vector<DailySeries>
group_points(std::map<std::pair<std::string, std::string>,
                      std::vector<DatedValue>>& acc) {
  std::vector<DailySeries> out;
  for (auto& [key, points] : acc) {
    std::sort(points.begin(), points.end(),
              [](const DatedValue& a, const DatedValue& b) {
                return a.day < b.day;
              });
    out.push_back({key.first, key.second, std::move(points)});
  }
  return out;
}

std::vector<DailySeries> read_plain_series(std::istream& in) {
  std::string line;
  next_line(in, line); // header, already checked by the caller
  std::map<std::pair<std::string, std::string>, std::vector<DatedValue>> acc;
  std::set<std::pair<std::string, Day>> seen;
  size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      parse_fail(line_no, "expected escalator_id,day,f_t_wh");
    Day day;
    try {
      day = parse_date(fields[1]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    if (!seen.insert({fields[0], day}).second)
      throw Error(ErrorCode::Validation,
                  "line " + std::to_string(line_no) + ": duplicate day " +
                      fields[1] + " for " + fields[0]);
    acc[{fields[0], ""}].push_back(
        {day, parse_double_field(fields[2], line_no, "fixed loss")});
  }
  return group_points(acc);
}

std::vector<DailySeries> read_estimates_as_series(std::istream& in) {
  std::string line;
  next_line(in, line); // header
  std::map<std::pair<std::string, std::string>, std::vector<DatedValue>> acc;
  std::set<std::tuple<std::string, std::string, Day>> seen;
  size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_csv(line);
    if (fields.size() != 13)
      parse_fail(line_no, "expected an estimates row with 13 fields");
    if (!fields[12].empty() || fields[3].empty())
      continue; // failed day, no value to monitor
    Day day;
    try {
      day = parse_date(fields[1]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    if (!seen.insert({fields[0], fields[2], day}).second)
      throw Error(ErrorCode::Validation,
                  "line " + std::to_string(line_no) + ": duplicate day " +
                      fields[1] + " for " + fields[0] + "/" + fields[2]);
    acc[{fields[0], fields[2]}].push_back(
        {day, parse_double_field(fields[3], line_no, "value")});
  }
  return group_points(acc);
}

} // namespace

std::vector<DailySeries> read_series_csv(std::istream& in) {
  std::string header;
  {
    std::streampos start = in.tellg();
    if (!next_line(in, header))
      throw Error(ErrorCode::Parse, "empty series file");
    in.seekg(start);
  }
  header = trim(header);
  if (header == kSeriesHeader)
    return read_plain_series(in);
  if (header == kEstimatesHeader)
    return read_estimates_as_series(in);
  throw Error(ErrorCode::Parse,
              std::string("unrecognized series header; expected '") +
                  kSeriesHeader + "' or the estimates schema");
}

void write_series_csv(std::ostream& out,
                      const std::vector<DailySeries>& series) {
  out << kSeriesHeader << "\n";
  for (const auto& s : series)
    for (const auto& p : s.points)
      out << csv_quote(s.escalator_id) << ',' << format_date(p.day) << ','
          << format_double(p.value) << "\n";
}

std::vector<EstimateRow> run_estimates(const std::vector<DailyProfile>& profiles,
                                       const std::vector<Method>& methods,
                                       const EstimateParams& params,
                                       bool strict) {
  std::vector<EstimateRow> rows;
  rows.reserve(profiles.size() * methods.size());
  for (const auto& profile : profiles) {
    for (Method m : methods) {
      EstimateRow row;
      row.escalator_id = profile.escalator_id;
      row.day = profile.day;
      row.method = m;
      try {
        switch (m) {
        case Method::Classical:
          row.estimate = classical_fixed_loss(profile);
          break;
        case Method::Engineering:
          row.estimate = engineering_fixed_loss(profile, params.subset_pct);
          break;
        case Method::Optimization:
          row.estimate = optimization_fixed_loss(profile, params.optimization);
          break;
        }
        row.ok = true;
      } catch (const Error& e) {
        if (strict)
          throw Error(e.code(), std::string(e.what()) + " (" +
                                    profile.escalator_id + " " +
                                    format_date(profile.day) + ")");
        row.error = std::string(error_code_name(e.code())) + ": " + e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_estimates_csv(std::ostream& out,
                         const std::vector<EstimateRow>& rows) {
  out << kEstimatesHeader << "\n";
  for (const auto& r : rows) {
    out << csv_quote(r.escalator_id) << ',' << format_date(r.day) << ','
        << method_name(r.method) << ',';
    if (!r.ok) {
      out << ",,,,,,,,," << csv_quote(r.error) << "\n";
      continue;
    }
    const auto& e = r.estimate;
    out << format_double(e.value_wh) << ',';
    if (r.method == Method::Optimization)
      out << format_double(e.delta_wh) << ','
          << format_double(e.grid_resolution_wh) << ",,,"
          << e.objective << ',' << format_double(e.interval_lo_wh) << ','
          << format_double(e.interval_hi_wh) << ',' << e.samples_used;
    else if (r.method == Method::Engineering)
      out << ",," << format_double(e.subset_pct) << ",,,,," << e.samples_used;
    else
      out << ",,," << e.window_minutes << ",,,," << e.samples_used;
    out << ",\n";
  }
}

void write_estimates_json(std::ostream& out,
                          const std::vector<EstimateRow>& rows) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["escalator_id"] = r.escalator_id;
    j["day"] = format_date(r.day);
    j["method"] = method_name(r.method);
    if (!r.ok) {
      j["error"] = r.error;
      doc.push_back(std::move(j));
      continue;
    }
    const auto& e = r.estimate;
    j["value_wh"] = e.value_wh;
    ordered_json params;
    ordered_json diag;
    diag["samples_used"] = e.samples_used;
    switch (r.method) {
    case Method::Classical:
      params["window_minutes"] = e.window_minutes;
      break;
    case Method::Engineering:
      params["subset_pct"] = e.subset_pct;
      break;
    case Method::Optimization:
      params["delta_wh"] = e.delta_wh;
      params["grid_resolution_wh"] = e.grid_resolution_wh;
      diag["objective"] = e.objective;
      diag["interval_lo_wh"] = e.interval_lo_wh;
      diag["interval_hi_wh"] = e.interval_hi_wh;
      break;
    }
    j["params"] = std::move(params);
    j["diagnostics"] = std::move(diag);
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << "\n";
}

std::vector<DailySeries>
series_from_estimates(const std::vector<EstimateRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<DatedValue>> acc;
  for (const auto& r : rows)
    if (r.ok)
      acc[{r.escalator_id, method_name(r.method)}].push_back(
          {r.day, r.estimate.value_wh});
  return group_points(acc);
}

SeriesLoadResult read_series_auto(std::istream& in,
                                  const IngestOptions& ingest,
                                  const OptimizationConfig& optimization,
                                  bool strict) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string header;
  {
    std::istringstream probe(buffer.str());
    if (!next_line(probe, header))
      throw Error(ErrorCode::Parse, "empty input");
  }
  header = trim(header);

  SeriesLoadResult result;
  if (header == kProfileHeader) {
    std::istringstream body(buffer.str());
    const auto profiles = ingest_csv(body, ingest);
    EstimateParams params;
    params.optimization = optimization;
    const auto rows =
        run_estimates(profiles, {Method::Optimization}, params, strict);
    for (const auto& r : rows)
      if (!r.ok)
        result.notes.push_back(r.escalator_id + " " + format_date(r.day) +
                               ": " + r.error);
    result.groups = series_from_estimates(rows);
    return result;
  }
  std::istringstream body(buffer.str());
  result.groups = read_series_csv(body);
  return result;
}

ExperimentLabel read_label_json(std::istream& in) {
  using nlohmann::json;
  try {
    const json doc = json::parse(in);
    ExperimentLabel label;
    label.escalator_id = doc.at("escalator_id").get<std::string>();
    label.day = parse_date(doc.at("day").get<std::string>());
    label.f_experiment_wh = doc.at("f_experiment_wh").get<double>();
    label.convergence_minute = doc.value("convergence_minute", 0);
    if (!(label.f_experiment_wh > 0.0))
      throw Error(ErrorCode::Validation, "label must be positive");
    return label;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("label JSON: ") + e.what());
  }
}

void write_label_json(std::ostream& out, const ExperimentLabel& label) {
  nlohmann::ordered_json j;
  j["escalator_id"] = label.escalator_id;
  j["day"] = format_date(label.day);
  j["f_experiment_wh"] = label.f_experiment_wh;
  j["convergence_minute"] = label.convergence_minute;
  out << j.dump(2) << "\n";
}

void write_curve_csv(std::ostream& out, const TuningCurve& curve) {
  out << "param,mean_error_wh,std_error_wh\n";
  for (size_t i = 0; i < curve.param.size(); ++i) {
    out << format_double(curve.param[i]) << ','
        << format_double(curve.mean_error[i]) << ',';
    if (!std::isnan(curve.std_error[i]))
      out << format_double(curve.std_error[i]);
    out << "\n";
  }
}

void write_chart_csv(std::ostream& out, const std::vector<ChartPoint>& chart) {
  out << "day,f_t_wh,z_t,mu_w,sigma_w,ucl,lcl,signal,burn_in,"
         "maintenance_notes\n";
  const auto field = [](double v) {
    return std::isnan(v) ? std::string() : format_double(v);
  };
  for (const auto& p : chart) {
    std::string notes;
    for (const auto& n : p.maintenance_notes) {
      if (!notes.empty())
        notes += "; ";
      notes += n;
    }
    out << format_date(p.day) << ',' << format_double(p.f_t_wh) << ','
        << field(p.z_t) << ',' << field(p.mu_w) << ',' << field(p.sigma_w)
        << ',' << field(p.ucl) << ',' << field(p.lcl) << ','
        << (p.signal ? 1 : 0) << ',' << (p.in_burn_in ? 1 : 0) << ','
        << csv_quote(notes) << "\n";
  }
}

std::vector<MaintenanceRecord> read_maintenance_csv(std::istream& in) {
  std::string line;
  if (!next_line(in, line) || trim(line) != kMaintenanceHeader)
    throw Error(ErrorCode::Parse,
                std::string("expected header '") + kMaintenanceHeader + "'");
  std::vector<MaintenanceRecord> records;
  size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      parse_fail(line_no, "expected escalator_id,day,note");
    MaintenanceRecord rec;
    rec.escalator_id = fields[0];
    try {
      rec.event.day = parse_date(fields[1]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    rec.event.note = fields[2];
    records.push_back(std::move(rec));
  }
  return records;
}

} // namespace efl
