#include "labeling.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "error.hpp"

namespace efl {

std::vector<double> moving_average(const std::vector<double>& series,
                                   int window) {
  if (window < 1)
    throw Error(ErrorCode::Config, "moving-average window must be >= 1");
  if (int(series.size()) < window)
    throw Error(ErrorCode::InsufficientData,
                "series shorter than moving-average window");
  std::vector<double> out;
  out.reserve(series.size() - size_t(window) + 1);
  double sum = std::accumulate(series.begin(), series.begin() + window, 0.0);
  out.push_back(sum / window);
  for (size_t i = size_t(window); i < series.size(); ++i) {
    sum += series[i] - series[i - size_t(window)];
    out.push_back(sum / window);
  }
  return out;
}

ExperimentLabel extract_label(const DailyProfile& profile,
                              const LabelOptions& options) {
  if (options.hold_minutes < 1 || !(options.tol_wh > 0.0))
    throw Error(ErrorCode::Config, "label options require hold >= 1, tol > 0");

  std::vector<double> energies;
  std::vector<int> minutes;
  for (size_t i = 0; i < profile.samples.size(); ++i) {
    if (profile.operating[i]) {
      energies.push_back(profile.samples[i].energy_wh);
      minutes.push_back(profile.samples[i].minute);
    }
  }
  const auto ma = moving_average(energies, options.ma_window);

  // Earliest j such that the `hold` steps ma[j] - ma[j-1], ..., all stay
  // below tol. The converged segment then starts at the value before step j.
  long converged_at = -1;
  long quiet = 0;
  for (size_t j = 1; j < ma.size(); ++j) {
    if (std::abs(ma[j] - ma[j - 1]) < options.tol_wh) {
      if (++quiet == options.hold_minutes) {
        converged_at = long(j) - options.hold_minutes;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (converged_at < 0)
    throw Error(ErrorCode::NoConvergence,
                "moving average never converged within the run (" +
                    profile.escalator_id + " " + format_date(profile.day) +
                    ")");

  // MA index k covers the raw window ending at k + window - 1.
  const size_t start = size_t(converged_at) + size_t(options.ma_window) - 1;
  const double tail_sum =
      std::accumulate(energies.begin() + long(start), energies.end(), 0.0);

  ExperimentLabel label;
  label.escalator_id = profile.escalator_id;
  label.day = profile.day;
  label.convergence_minute = minutes[start];
  label.f_experiment_wh = tail_sum / double(energies.size() - start);
  if (!(label.f_experiment_wh > 0.0))
    throw Error(ErrorCode::Validation, "experiment label is not positive");
  return label;
}

std::vector<ErrorRecord>
estimation_errors(const std::vector<ExperimentLabel>& labels,
                  const std::vector<EstimateKeyed>& estimates) {
  std::map<std::pair<std::string, Day>, const ExperimentLabel*> by_key;
  for (const auto& l : labels) {
    if (!by_key.emplace(std::make_pair(l.escalator_id, l.day), &l).second)
      throw Error(ErrorCode::Join, "duplicate label for " + l.escalator_id +
                                       " " + format_date(l.day));
  }

  std::vector<ErrorRecord> out;
  std::string orphans;
  std::map<std::pair<std::string, Day>, bool> used;
  for (const auto& e : estimates) {
    auto it = by_key.find({e.escalator_id, e.day});
    if (it == by_key.end()) {
      orphans += " estimate:" + e.escalator_id + "/" + format_date(e.day);
      continue;
    }
    used[{e.escalator_id, e.day}] = true;
    const double tau = e.estimate.value_wh - it->second->f_experiment_wh;
    out.push_back({e.escalator_id, e.day, e.estimate.method, tau,
                   100.0 * tau / it->second->f_experiment_wh});
  }
  for (const auto& [key, label] : by_key) {
    (void)label;
    if (!used.count(key))
      orphans += " label:" + key.first + "/" + format_date(key.second);
  }
  if (!orphans.empty())
    throw Error(ErrorCode::Join, "unmatched rows:" + orphans);
  return out;
}

ErrorSummary summarize_errors(const std::vector<ErrorRecord>& errors) {
  if (errors.size() < 2)
    throw Error(ErrorCode::InsufficientData,
                "error summary requires >= 2 records");
  double mean = 0.0;
  for (const auto& e : errors)
    mean += e.tau_wh;
  mean /= double(errors.size());
  double ss = 0.0;
  for (const auto& e : errors)
    ss += (e.tau_wh - mean) * (e.tau_wh - mean);
  return {mean, std::sqrt(ss / double(errors.size() - 1))};
}

TuningCurve
grid_tune(const std::vector<std::pair<DailyProfile, ExperimentLabel>>& experiments,
          Method method, const std::vector<double>& grid) {
  if (experiments.empty())
    throw Error(ErrorCode::Config, "grid tuning requires experiments");
  if (grid.empty())
    throw Error(ErrorCode::Config, "grid tuning requires a non-empty grid");
  if (method != Method::Engineering && method != Method::Optimization)
    throw Error(ErrorCode::Config,
                "tunable methods are engineering and optimization");

  TuningCurve curve;
  for (double value : grid) {
    std::vector<ErrorRecord> errors;
    for (const auto& [profile, label] : experiments) {
      FixedLossEstimate est;
      try {
        est = method == Method::Engineering
                  ? engineering_fixed_loss(profile, value)
                  : optimization_fixed_loss(
                        profile, OptimizationConfig{
                                     value, std::min(0.01, value / 2.0)});
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (experiment " +
                                  profile.escalator_id + " " +
                                  format_date(profile.day) + ", grid value " +
                                  std::to_string(value) + ")");
      }
      const double tau = est.value_wh - label.f_experiment_wh;
      errors.push_back({profile.escalator_id, profile.day, method, tau,
                        100.0 * tau / label.f_experiment_wh});
    }
    double mean = 0.0;
    for (const auto& e : errors)
      mean += e.tau_wh;
    mean /= double(errors.size());
    curve.param.push_back(value);
    curve.mean_error.push_back(mean);
    curve.std_error.push_back(
        errors.size() >= 2 ? summarize_errors(errors).stddev
                           : std::numeric_limits<double>::quiet_NaN());
  }
  return curve;
}

} // namespace efl
