#pragma once

#include <string>
#include <utility>
#include <vector>

#include "estimators.hpp"
#include "profile.hpp"

namespace efl {

// Ground-truth fixed loss extracted from a vacant-run experiment: once the
// smoothed energy settles, the remaining raw readings average to the label.
struct ExperimentLabel {
  std::string escalator_id;
  Day day{};
  double f_experiment_wh = 0.0;
  int convergence_minute = 0;
};

struct ErrorRecord {
  std::string escalator_id;
  Day day{};
  Method method = Method::Classical;
  double tau_wh = 0.0;  // estimate - label
  double tau_pct = 0.0; // 100 * tau / label
};

struct ErrorSummary {
  double mean = 0.0;
  double stddev = 0.0; // sample standard deviation (n - 1)
};

// One row per grid value; std_error is NaN where it is undefined (a single
// experiment).
struct TuningCurve {
  std::vector<double> param;
  std::vector<double> mean_error;
  std::vector<double> std_error;
};

struct LabelOptions {
  int ma_window = 5;
  double tol_wh = 0.1;
  int hold_minutes = 10;
};

// Trailing moving average: output[i] is the mean of series[i .. i+window-1],
// so output has length series.size() - window + 1.
std::vector<double> moving_average(const std::vector<double>& series,
                                   int window);

// Finds the first point where `hold` consecutive moving-average steps each
// move by less than tol_wh, then labels the day with the mean of the raw
// energies from that point to the end of the run. The profile must be a
// vacant-run experiment; that is the caller's responsibility.
ExperimentLabel extract_label(const DailyProfile& profile,
                              const LabelOptions& options = {});

struct EstimateKeyed {
  std::string escalator_id;
  Day day{};
  FixedLossEstimate estimate;
};

// Joins labels and estimates by (escalator_id, day). Unmatched rows on either
// side raise Error(Join) listing the orphans.
std::vector<ErrorRecord>
estimation_errors(const std::vector<ExperimentLabel>& labels,
                  const std::vector<EstimateKeyed>& estimates);

// Mean and sample standard deviation of tau. Requires >= 2 records.
ErrorSummary summarize_errors(const std::vector<ErrorRecord>& errors);

// Runs the estimator over every experiment at each grid value and collects
// the error mean/std per value. No optimum is auto-selected; the curve is the
// deliverable. Method must be Engineering (grid = subset percentages) or
// Optimization (grid = delta values).
TuningCurve
grid_tune(const std::vector<std::pair<DailyProfile, ExperimentLabel>>& experiments,
          Method method, const std::vector<double>& grid);

} // namespace efl
