#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"

namespace efl {

const char* method_name(Method m) {
  switch (m) {
  case Method::Classical:
    return "classical";
  case Method::Engineering:
    return "engineering";
  case Method::Optimization:
    return "optimization";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "classical")
    return Method::Classical;
  if (name == "engineering")
    return Method::Engineering;
  if (name == "optimization")
    return Method::Optimization;
  throw Error(ErrorCode::InvalidArgument, "unknown method: '" + name + "'");
}

namespace {

double median_sorted(const std::vector<double>& sorted) {
  const size_t n = sorted.size();
  if (n % 2 == 1)
    return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

void require_positive(double value, Method method) {
  if (!(value > 0.0))
    throw Error(ErrorCode::Validation,
                std::string(method_name(method)) +
                    " estimate is not positive: the fixed loss must be > 0");
}

} // namespace

FixedLossEstimate classical_fixed_loss(const DailyProfile& profile) {
  const auto energies = profile.operating_energies();
  if (int(energies.size()) < kClassicalWindowMinutes)
    throw Error(ErrorCode::InsufficientData,
                "classical estimator requires >= 30 operating minutes, got " +
                    std::to_string(energies.size()));
  const double sum = std::accumulate(energies.end() - kClassicalWindowMinutes,
                                     energies.end(), 0.0);

  FixedLossEstimate est;
  est.method = Method::Classical;
  est.value_wh = sum / kClassicalWindowMinutes;
  est.window_minutes = kClassicalWindowMinutes;
  est.samples_used = kClassicalWindowMinutes;
  require_positive(est.value_wh, est.method);
  return est;
}

FixedLossEstimate engineering_fixed_loss(const DailyProfile& profile,
                                         double subset_pct) {
  if (!(subset_pct > 0.0) || subset_pct > 100.0)
    throw Error(ErrorCode::Config, "subset percentage must be in (0, 100]");
  const auto energies = profile.operating_energies();
  if (int(energies.size()) <= 60)
    throw Error(ErrorCode::InsufficientData,
                "engineering estimator requires > 60 operating minutes, got " +
                    std::to_string(energies.size()));

  // Only the first run's warm-up hour is removed; later restarts keep theirs.
  const auto runs = operating_runs(profile);
  const int drop = std::min(60, runs.front().length());
  std::vector<double> rest(energies.begin() + drop, energies.end());

  const size_t k =
      std::max<size_t>(1, size_t(std::floor(subset_pct / 100.0 * rest.size())));
  std::sort(rest.begin(), rest.end());
  std::vector<double> subset =
      profile.direction == Direction::Up
          ? std::vector<double>(rest.begin(), rest.begin() + k)
          : std::vector<double>(rest.end() - k, rest.end());

  FixedLossEstimate est;
  est.method = Method::Engineering;
  est.value_wh = median_sorted(subset);
  est.subset_pct = subset_pct;
  est.samples_used = int(k);
  require_positive(est.value_wh, est.method);
  return est;
}

long objective_value(const DailyProfile& profile, double fixed_loss_wh,
                     double delta_wh, Direction direction) {
  if (!(delta_wh > 0.0))
    throw Error(ErrorCode::Config, "delta must be positive");
  long above = 0, below = 0; // within delta strictly above / below F
  for (size_t i = 0; i < profile.samples.size(); ++i) {
    if (!profile.operating[i])
      continue;
    const double diff = profile.samples[i].energy_wh - fixed_loss_wh;
    if (diff > 0.0 && diff < delta_wh)
      ++above;
    else if (diff < 0.0 && -diff < delta_wh)
      ++below;
  }
  return direction == Direction::Up ? above - below : below - above;
}

FixedLossEstimate optimization_fixed_loss(const DailyProfile& profile,
                                          const OptimizationConfig& config) {
  const double delta = config.delta_wh;
  const double res = config.grid_resolution_wh;
  if (!(delta > 0.0) || !(res > 0.0) || !(res < delta))
    throw Error(ErrorCode::Config,
                "optimization config requires 0 < grid resolution < delta");
  std::vector<double> energies = profile.operating_energies();
  if (energies.empty())
    throw Error(ErrorCode::InsufficientData,
                "optimization estimator requires >= 1 operating minute");
  std::sort(energies.begin(), energies.end());

  const double lo = std::max(res, energies.front() - delta);
  const double hi = energies.back() + delta;
  const long cells = std::max<long>(1, long(std::ceil((hi - lo) / res)));

  // The objective is piecewise constant between breakpoints {E_i, E_i +- d};
  // counting the strict-inequality sets on the sorted energies:
  //   up:   |S+| = #(F, F+d)   |S-| = #(F-d, F)
  const auto count_open = [&](double a, double b) {
    return long(std::lower_bound(energies.begin(), energies.end(), b) -
                std::upper_bound(energies.begin(), energies.end(), a));
  };

  long best = 0;
  std::vector<long> values(static_cast<size_t>(cells), 0L);
  for (long j = 0; j < cells; ++j) {
    const double f = lo + (double(j) + 0.5) * res;
    const long above = count_open(f, f + delta);
    const long below = count_open(f - delta, f);
    const long v = profile.direction == Direction::Up ? above - below
                                                      : below - above;
    values[size_t(j)] = v;
    if (j == 0 || v > best)
      best = v;
  }

  // Contiguous runs of grid points achieving the maximum; keep the run
  // hugging the data cloud (highest for up, lowest for down).
  long run_begin = -1, chosen_begin = -1, chosen_end = -1;
  for (long j = 0; j <= cells; ++j) {
    const bool at_max = j < cells && values[size_t(j)] == best;
    if (at_max && run_begin < 0)
      run_begin = j;
    if (!at_max && run_begin >= 0) {
      if (profile.direction == Direction::Up || chosen_begin < 0) {
        chosen_begin = run_begin;
        chosen_end = j - 1;
      }
      run_begin = -1;
    }
  }

  const auto center = [&](long j) { return lo + (double(j) + 0.5) * res; };
  FixedLossEstimate est;
  est.method = Method::Optimization;
  est.delta_wh = delta;
  est.grid_resolution_wh = res;
  est.objective = best;
  est.interval_lo_wh = center(chosen_begin);
  est.interval_hi_wh = center(chosen_end);
  est.value_wh = 0.5 * (est.interval_lo_wh + est.interval_hi_wh);
  est.samples_used = int(energies.size());
  require_positive(est.value_wh, est.method);
  return est;
}

} // namespace efl
