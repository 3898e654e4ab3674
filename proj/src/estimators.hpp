#pragma once

#include <string>

#include "profile.hpp"

namespace efl {

enum class Method { Classical, Engineering, Optimization };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Search settings for the optimization estimator. The objective is scanned on
// a uniform grid; delta_wh is the proximity band on either side of a
// candidate fixed loss.
struct OptimizationConfig {
  double delta_wh = 0.3;
  double grid_resolution_wh = 0.01;
};

constexpr double kDefaultSubsetPct = 5.0;
constexpr int kClassicalWindowMinutes = 30;

// A single day's fixed-loss estimate plus the parameters used and
// method-specific diagnostics. Unused fields stay zero.
struct FixedLossEstimate {
  double value_wh = 0.0;
  Method method = Method::Classical;

  // params
  double delta_wh = 0.0;           // optimization
  double grid_resolution_wh = 0.0; // optimization
  double subset_pct = 0.0;         // engineering
  int window_minutes = 0;          // classical

  // diagnostics
  long objective = 0;              // optimization: max |S+| - |S-|
  double interval_lo_wh = 0.0;     // optimization: chosen maximizing interval
  double interval_hi_wh = 0.0;
  int samples_used = 0;
};

// Mean energy of the last 30 operating minutes. Requires >= 30 operating
// minutes.
FixedLossEstimate classical_fixed_loss(const DailyProfile& profile);

// Discards the first 60 operating minutes of the first operating run, then
// takes the median of the p% smallest (up) or largest (down) remaining
// energies. Requires > 60 operating minutes; subset size is
// max(1, floor(p/100 * remaining)).
FixedLossEstimate engineering_fixed_loss(const DailyProfile& profile,
                                         double subset_pct = kDefaultSubsetPct);

// |S+| - |S-| for candidate fixed loss F over the operating minutes.
// Up:   S+ = {i : 0 < E_i - F < delta},  S- = {i : 0 < F - E_i < delta}
// Down: the two sets swap roles. Inequalities are strict on both sides, so a
// sample exactly at F or at distance delta counts in neither set.
long objective_value(const DailyProfile& profile, double fixed_loss_wh,
                     double delta_wh, Direction direction);

// Maximizes objective_value over a uniform grid spanning
// [max(resolution, min E - delta), max E + delta], subject to F > 0. The grid
// samples cell centers (lo + (k+1/2)*resolution) so grid points stay off the
// breakpoints of the piecewise-constant objective. Among maximizing grid
// points, returns the midpoint of the contiguous maximizing interval nearest
// the data cloud: the one with the largest upper endpoint for up, the
// smallest lower endpoint for down.
FixedLossEstimate optimization_fixed_loss(const DailyProfile& profile,
                                          const OptimizationConfig& config = {});

} // namespace efl
