#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "estimators.hpp"
#include "labeling.hpp"
#include "monitoring.hpp"
#include "profile.hpp"

namespace efl {

struct IngestOptions {
  int day_boundary_minute = 4 * 60; // minutes after midnight, default 04:00
  double off_threshold_wh = kDefaultOffThresholdWh;
};

// Minute-level CSV: escalator_id,timestamp,direction,energy_wh with
// YYYY-MM-DDTHH:MM timestamps. Rows are grouped into working days that run
// from the boundary (inclusive) to the next day's boundary (exclusive); rows
// may arrive in any order, output profiles are sorted by (escalator, day).
std::vector<DailyProfile> ingest_csv(std::istream& in,
                                     const IngestOptions& options = {});
void write_profiles_csv(std::ostream& out,
                        const std::vector<DailyProfile>& profiles,
                        const IngestOptions& options = {});

// A per-day value table for one escalator: a fixed-loss series, a chart
// input, or simulator ground truth. `method` is set when the series came out
// of an estimator ("" otherwise).
struct DailySeries {
  std::string escalator_id;
  std::string method;
  std::vector<DatedValue> points;
};

// CSV schema: escalator_id,day,f_t_wh
std::vector<DailySeries> read_series_csv(std::istream& in);
void write_series_csv(std::ostream& out, const std::vector<DailySeries>& series);

// One estimator result (or failure) for one escalator-day.
struct EstimateRow {
  std::string escalator_id;
  Day day{};
  Method method = Method::Classical;
  bool ok = false;
  FixedLossEstimate estimate;
  std::string error;
};

struct EstimateParams {
  OptimizationConfig optimization;
  double subset_pct = kDefaultSubsetPct;
};

// Runs the requested estimators over every profile. Per-day failures become
// error-marked rows unless strict is set, in which case the first failure
// propagates.
std::vector<EstimateRow> run_estimates(const std::vector<DailyProfile>& profiles,
                                       const std::vector<Method>& methods,
                                       const EstimateParams& params = {},
                                       bool strict = false);

void write_estimates_csv(std::ostream& out, const std::vector<EstimateRow>& rows);
void write_estimates_json(std::ostream& out, const std::vector<EstimateRow>& rows);

// Successful estimate rows regrouped as per-(escalator, method) daily series.
std::vector<DailySeries> series_from_estimates(const std::vector<EstimateRow>& rows);

// Auto-detecting series loader: accepts the raw minute schema (fixed loss is
// then computed with the optimization estimator), the plain series schema,
// and the estimates CSV schema. `notes` collects days skipped in non-strict
// mode.
struct SeriesLoadResult {
  std::vector<DailySeries> groups;
  std::vector<std::string> notes;
};
SeriesLoadResult read_series_auto(std::istream& in, const IngestOptions& ingest,
                                  const OptimizationConfig& optimization,
                                  bool strict);

// Single experiment label as JSON.
ExperimentLabel read_label_json(std::istream& in);
void write_label_json(std::ostream& out, const ExperimentLabel& label);

// CSV schema: param,mean_error_wh,std_error_wh (std empty where undefined)
void write_curve_csv(std::ostream& out, const TuningCurve& curve);

// CSV schema:
//   day,f_t_wh,z_t,mu_w,sigma_w,ucl,lcl,signal,burn_in,maintenance_notes
// Burn-in rows leave the undefined statistics empty.
void write_chart_csv(std::ostream& out, const std::vector<ChartPoint>& chart);

// CSV schema: escalator_id,day,note
struct MaintenanceRecord {
  std::string escalator_id;
  MaintenanceEvent event;
};
std::vector<MaintenanceRecord> read_maintenance_csv(std::istream& in);

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

} // namespace efl
