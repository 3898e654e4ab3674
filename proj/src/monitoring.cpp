#include "monitoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace efl {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kDeviationIqrRatio = 1.349; // IQR of a normal in sigma units

void validate_config(const EwmaConfig& c) {
  if (!(c.lambda > 0.0) || !(c.lambda < 1.0))
    throw Error(ErrorCode::Config, "lambda must be in (0, 1)");
  if (!(c.k > 0.0))
    throw Error(ErrorCode::Config, "k must be positive");
  if (c.window_days < 4)
    throw Error(ErrorCode::Config, "window must be >= 4 days");
  if (!(c.d_w > 0.0))
    throw Error(ErrorCode::Config, "d_w must be positive");
  if (c.sigma_floor_wh < 0.0)
    throw Error(ErrorCode::Config, "sigma floor must be >= 0");
}

} // namespace

double ewma_update(double z_prev, double f_t, double lambda) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw Error(ErrorCode::Config, "lambda must be in (0, 1)");
  return lambda * f_t + (1.0 - lambda) * z_prev;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "quantile of an empty window");
  std::sort(values.begin(), values.end());
  const double pos = (double(values.size()) - 1.0) * q;
  const size_t lo = size_t(std::floor(pos));
  if (lo + 1 >= values.size())
    return values.back();
  const double frac = pos - double(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double trimean(const std::vector<double>& window) {
  const double q1 = quantile(window, 0.25);
  const double q2 = quantile(window, 0.50);
  const double q3 = quantile(window, 0.75);
  return (q1 + 2.0 * q2 + q3) / 4.0;
}

double robust_sigma(const std::vector<double>& window, double d_w,
                    double sigma_floor, SigmaConvention convention) {
  if (window.size() < 4)
    throw Error(ErrorCode::InsufficientData,
                "robust sigma requires a window of >= 4 values");
  if (!(d_w > 0.0))
    throw Error(ErrorCode::Config, "d_w must be positive");
  const double iqr = quantile(window, 0.75) - quantile(window, 0.25);
  if (convention == SigmaConvention::Paper) {
    const double var = std::max(iqr / d_w, sigma_floor * sigma_floor);
    return std::sqrt(var);
  }
  return std::max(iqr / kDeviationIqrRatio, sigma_floor);
}

std::pair<double, double> control_limits(double mu_w, double sigma_sq_w,
                                         double lambda, double k) {
  if (sigma_sq_w < 0.0)
    throw Error(ErrorCode::InvalidArgument, "sigma^2 must be >= 0");
  const double half =
      k * std::sqrt(lambda / (2.0 - lambda)) * std::sqrt(sigma_sq_w);
  return {mu_w + half, mu_w - half};
}

std::vector<ChartPoint> run_chart(const std::vector<DatedValue>& series,
                                  const EwmaConfig& config) {
  validate_config(config);
  if (series.empty())
    throw Error(ErrorCode::InvalidArgument, "empty fixed-loss series");
  for (size_t i = 1; i < series.size(); ++i)
    if (!(series[i - 1].day < series[i].day))
      throw Error(ErrorCode::Validation,
                  "series days must be strictly increasing (at " +
                      format_date(series[i].day) + ")");

  const size_t w = size_t(config.window_days);
  std::vector<ChartPoint> chart(series.size());

  for (size_t i = 0; i < series.size() && i < w; ++i) {
    chart[i].day = series[i].day;
    chart[i].f_t_wh = series[i].value;
    chart[i].in_burn_in = true;
    chart[i].z_t = chart[i].mu_w = chart[i].sigma_w = kNan;
    chart[i].ucl = chart[i].lcl = kNan;
  }
  if (series.size() <= w)
    return chart;

  std::vector<double> window(w);
  for (size_t i = 0; i < w; ++i)
    window[i] = series[i].value;
  double z = trimean(window); // Z_0

  for (size_t i = w; i < series.size(); ++i) {
    for (size_t j = 0; j < w; ++j)
      window[j] = series[i - w + j].value;
    const double mu = trimean(window);
    const double sigma = robust_sigma(window, config.d_w,
                                      config.sigma_floor_wh,
                                      config.sigma_convention);
    const auto [ucl, lcl] =
        control_limits(mu, sigma * sigma, config.lambda, config.k);
    z = ewma_update(z, series[i].value, config.lambda);

    ChartPoint& p = chart[i];
    p.day = series[i].day;
    p.f_t_wh = series[i].value;
    p.z_t = z;
    p.mu_w = mu;
    p.sigma_w = sigma;
    p.ucl = ucl;
    p.lcl = lcl;
    p.signal = z > ucl || z < lcl;
  }
  return chart;
}

void annotate_maintenance(std::vector<ChartPoint>& chart,
                          const std::vector<MaintenanceEvent>& events) {
  using std::chrono::days;
  for (auto& point : chart) {
    for (const auto& event : events) {
      if (event.day == point.day)
        point.maintenance_notes.push_back(event.note);
      if (point.signal) {
        const auto gap = point.day - event.day;
        if (gap >= days{-3} && gap <= days{3})
          point.maintenance_coincident = true;
      }
    }
  }
}

} // namespace efl
