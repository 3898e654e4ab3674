#pragma once

#include <string>
#include <vector>

#include "date.hpp"

namespace efl {

enum class SigmaConvention {
  Paper,     // sigma^2 = IQR / d_w
  Deviation, // sigma   = IQR / 1.349
};

struct EwmaConfig {
  double lambda = 0.25;
  double k = 2.924;
  int window_days = 30;
  double d_w = 0.779;
  double sigma_floor_wh = 0.05;
  SigmaConvention sigma_convention = SigmaConvention::Paper;
};

// One charted day. During burn-in (the first window_days observations) the
// statistic and limits are not defined yet and stay NaN; no signal can be
// raised there.
struct ChartPoint {
  Day day{};
  double f_t_wh = 0.0;
  double z_t = 0.0;
  double mu_w = 0.0;
  double sigma_w = 0.0;
  double ucl = 0.0;
  double lcl = 0.0;
  bool signal = false;
  bool in_burn_in = false;
  std::vector<std::string> maintenance_notes;
  bool maintenance_coincident = false;
};

struct DatedValue {
  Day day{};
  double value = 0.0;
};

struct MaintenanceEvent {
  Day day{};
  std::string note;
};

// Z_t = lambda * F_t + (1 - lambda) * Z_{t-1}
double ewma_update(double z_prev, double f_t, double lambda);

// Linearly interpolated quantile at positions 1 + (n-1)q over the sorted
// values (the common "type 7" rule).
double quantile(std::vector<double> values, double q);

// (Q1 + 2*Q2 + Q3) / 4
double trimean(const std::vector<double>& window);

// Robust sigma from the window IQR, floored at sigma_floor. Under
// SigmaConvention::Paper the IQR/d_w ratio is taken as the *variance*;
// Deviation uses sigma = IQR/1.349 instead. Requires >= 4 values.
double robust_sigma(const std::vector<double>& window, double d_w,
                    double sigma_floor,
                    SigmaConvention convention = SigmaConvention::Paper);

// UCL/LCL = mu +- k * sqrt(lambda/(2-lambda) * sigma^2)
std::pair<double, double> control_limits(double mu_w, double sigma_sq_w,
                                         double lambda, double k);

// Moving-window EWMA chart over a daily fixed-loss series (days strictly
// increasing). Z starts at the trimean of the first window; each later day's
// limits come from the trailing window_days values, current day excluded.
// Monitoring continues after signals; the chart is never reset.
std::vector<ChartPoint> run_chart(const std::vector<DatedValue>& series,
                                  const EwmaConfig& config = {});

// Attaches maintenance notes to their days and flags signal days that fall
// within +-3 days of any maintenance event.
void annotate_maintenance(std::vector<ChartPoint>& chart,
                          const std::vector<MaintenanceEvent>& events);

} // namespace efl
