#include "fixedloss/fixedloss.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "error.hpp"
#include "io.hpp"
#include "labeling.hpp"
#include "monitoring.hpp"
#include "simulator.hpp"

using namespace efl;

struct efl_profiles {
  std::vector<DailyProfile> items;
  std::vector<std::string> days;
};

struct efl_estimates {
  std::vector<EstimateRow> rows;
  std::vector<std::string> days;
};

struct efl_series {
  std::vector<DailySeries> groups;
  std::vector<std::vector<std::string>> days;
  std::vector<std::string> notes;
};

struct efl_chart {
  std::string escalator_id;
  std::vector<ChartPoint> points;
  std::vector<std::string> days;
  std::vector<std::string> joined_notes;
};

struct efl_experiments {
  std::vector<std::pair<DailyProfile, ExperimentLabel>> items;
};

struct efl_curve {
  TuningCurve curve;
};

struct efl_scenario {
  SeriesConfig config;
};

namespace {

thread_local std::string g_last_error;

efl_status map_code(ErrorCode code) {
  switch (code) {
  case ErrorCode::Io:
    return EFL_ERR_IO;
  case ErrorCode::Parse:
    return EFL_ERR_PARSE;
  case ErrorCode::Validation:
    return EFL_ERR_VALIDATION;
  case ErrorCode::InsufficientData:
    return EFL_ERR_INSUFFICIENT_DATA;
  case ErrorCode::NoConvergence:
    return EFL_ERR_NO_CONVERGENCE;
  case ErrorCode::Config:
    return EFL_ERR_CONFIG;
  case ErrorCode::Join:
    return EFL_ERR_JOIN;
  case ErrorCode::InvalidArgument:
    return EFL_ERR_ARG;
  case ErrorCode::Internal:
    return EFL_ERR_INTERNAL;
  }
  return EFL_ERR_INTERNAL;
}

efl_status fail(efl_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

efl_status fail_arg(const char* message) { return fail(EFL_ERR_ARG, message); }

// Runs `fn`, translating exceptions into status codes.
template <typename Fn> efl_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return EFL_OK;
  } catch (const Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(EFL_ERR_INTERNAL, e.what());
  }
}

std::ifstream open_in(const char* path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, std::string("cannot open '") + path + "'");
  return in;
}

std::ofstream open_out(const char* path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::Io,
                std::string("cannot open '") + path + "' for writing");
  return out;
}

IngestOptions to_ingest(const efl_ingest_options* o) {
  IngestOptions opts;
  if (o) {
    if (o->day_boundary_minutes > 0)
      opts.day_boundary_minute = o->day_boundary_minutes;
    if (o->off_threshold_wh > 0.0)
      opts.off_threshold_wh = o->off_threshold_wh;
  }
  return opts;
}

EstimateParams to_params(const efl_estimate_params* p) {
  EstimateParams params;
  if (p) {
    if (p->delta_wh > 0.0)
      params.optimization.delta_wh = p->delta_wh;
    if (p->grid_resolution_wh > 0.0)
      params.optimization.grid_resolution_wh = p->grid_resolution_wh;
    if (p->subset_pct > 0.0)
      params.subset_pct = p->subset_pct;
  }
  return params;
}

LabelOptions to_label_options(const efl_label_options* o) {
  LabelOptions opts;
  if (o) {
    if (o->ma_window > 0)
      opts.ma_window = o->ma_window;
    if (o->tol_wh > 0.0)
      opts.tol_wh = o->tol_wh;
    if (o->hold_minutes > 0)
      opts.hold_minutes = o->hold_minutes;
  }
  return opts;
}

EwmaConfig to_ewma(const efl_ewma_config* c) {
  EwmaConfig cfg;
  if (c) {
    if (c->lambda > 0.0)
      cfg.lambda = c->lambda;
    if (c->k > 0.0)
      cfg.k = c->k;
    if (c->window_days > 0)
      cfg.window_days = c->window_days;
    if (c->d_w > 0.0)
      cfg.d_w = c->d_w;
    if (c->sigma_floor_wh > 0.0)
      cfg.sigma_floor_wh = c->sigma_floor_wh;
    cfg.sigma_convention = c->sigma_convention == 1
                               ? SigmaConvention::Deviation
                               : SigmaConvention::Paper;
  }
  return cfg;
}

void fill_series_strings(efl_series* s) {
  s->days.clear();
  for (const auto& g : s->groups) {
    std::vector<std::string> days;
    days.reserve(g.points.size());
    for (const auto& p : g.points)
      days.push_back(format_date(p.day));
    s->days.push_back(std::move(days));
  }
}

void fill_chart_strings(efl_chart* c) {
  c->days.clear();
  c->joined_notes.clear();
  for (const auto& p : c->points) {
    c->days.push_back(format_date(p.day));
    std::string joined;
    for (const auto& n : p.maintenance_notes) {
      if (!joined.empty())
        joined += "; ";
      joined += n;
    }
    c->joined_notes.push_back(std::move(joined));
  }
}

ExperimentLabel from_c_label(const efl_label& l) {
  ExperimentLabel label;
  label.escalator_id = l.escalator_id;
  label.day = parse_date(l.day);
  label.f_experiment_wh = l.f_experiment_wh;
  label.convergence_minute = l.convergence_minute;
  return label;
}

void to_c_label(const ExperimentLabel& label, efl_label* out) {
  std::snprintf(out->escalator_id, sizeof(out->escalator_id), "%s",
                label.escalator_id.c_str());
  std::snprintf(out->day, sizeof(out->day), "%s",
                format_date(label.day).c_str());
  out->f_experiment_wh = label.f_experiment_wh;
  out->convergence_minute = label.convergence_minute;
}

} // namespace

extern "C" {

const char* efl_version(void) { return "0.1.0"; }

const char* efl_status_name(efl_status status) {
  switch (status) {
  case EFL_OK:
    return "ok";
  case EFL_ERR_IO:
    return "io";
  case EFL_ERR_PARSE:
    return "parse";
  case EFL_ERR_VALIDATION:
    return "validation";
  case EFL_ERR_INSUFFICIENT_DATA:
    return "insufficient-data";
  case EFL_ERR_NO_CONVERGENCE:
    return "no-convergence";
  case EFL_ERR_CONFIG:
    return "config";
  case EFL_ERR_JOIN:
    return "join";
  case EFL_ERR_ARG:
    return "invalid-argument";
  case EFL_ERR_INTERNAL:
    return "internal";
  }
  return "?";
}

const char* efl_last_error(void) { return g_last_error.c_str(); }

/* ---- profiles ---- */

efl_status efl_profiles_load_csv(const char* path,
                                 const efl_ingest_options* options,
                                 efl_profiles** out) {
  if (!path || !out)
    return fail_arg("path and out must not be NULL");
  return guarded([&] {
    auto in = open_in(path);
    auto handle = std::make_unique<efl_profiles>();
    handle->items = ingest_csv(in, to_ingest(options));
    for (const auto& p : handle->items)
      handle->days.push_back(format_date(p.day));
    *out = handle.release();
  });
}

efl_status efl_profiles_save_csv(const efl_profiles* profiles,
                                 const char* path,
                                 const efl_ingest_options* options) {
  if (!profiles || !path)
    return fail_arg("profiles and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    write_profiles_csv(out, profiles->items, to_ingest(options));
  });
}

size_t efl_profiles_count(const efl_profiles* profiles) {
  return profiles ? profiles->items.size() : 0;
}

efl_status efl_profiles_info(const efl_profiles* profiles, size_t index,
                             efl_profile_info* out) {
  if (!profiles || !out)
    return fail_arg("profiles and out must not be NULL");
  if (index >= profiles->items.size())
    return fail_arg("profile index out of range");
  const DailyProfile& p = profiles->items[index];
  out->escalator_id = p.escalator_id.c_str();
  out->day = profiles->days[index].c_str();
  out->direction_up = p.direction == Direction::Up ? 1 : 0;
  out->n_samples = p.samples.size();
  out->n_operating = p.n_operating;
  return EFL_OK;
}

void efl_profiles_free(efl_profiles* profiles) { delete profiles; }

/* ---- estimation ---- */

efl_status efl_estimate(const efl_profiles* profiles, efl_method method,
                        const efl_estimate_params* params, int strict,
                        efl_estimates** out) {
  if (!profiles || !out)
    return fail_arg("profiles and out must not be NULL");
  return guarded([&] {
    std::vector<Method> methods;
    switch (method) {
    case EFL_METHOD_CLASSICAL:
      methods = {Method::Classical};
      break;
    case EFL_METHOD_ENGINEERING:
      methods = {Method::Engineering};
      break;
    case EFL_METHOD_OPTIMIZATION:
      methods = {Method::Optimization};
      break;
    case EFL_METHOD_ALL:
      methods = {Method::Classical, Method::Engineering, Method::Optimization};
      break;
    default:
      throw Error(ErrorCode::InvalidArgument, "unknown method");
    }
    auto handle = std::make_unique<efl_estimates>();
    handle->rows =
        run_estimates(profiles->items, methods, to_params(params), strict != 0);
    for (const auto& r : handle->rows)
      handle->days.push_back(format_date(r.day));
    *out = handle.release();
  });
}

size_t efl_estimates_count(const efl_estimates* estimates) {
  return estimates ? estimates->rows.size() : 0;
}

size_t efl_estimates_error_count(const efl_estimates* estimates) {
  if (!estimates)
    return 0;
  size_t n = 0;
  for (const auto& r : estimates->rows)
    if (!r.ok)
      ++n;
  return n;
}

efl_status efl_estimates_info(const efl_estimates* estimates, size_t index,
                              efl_estimate_info* out) {
  if (!estimates || !out)
    return fail_arg("estimates and out must not be NULL");
  if (index >= estimates->rows.size())
    return fail_arg("estimate index out of range");
  const EstimateRow& r = estimates->rows[index];
  static const efl_method kMethods[] = {EFL_METHOD_CLASSICAL,
                                        EFL_METHOD_ENGINEERING,
                                        EFL_METHOD_OPTIMIZATION};
  out->escalator_id = r.escalator_id.c_str();
  out->day = estimates->days[index].c_str();
  out->method = kMethods[int(r.method)];
  out->ok = r.ok ? 1 : 0;
  out->error = r.error.c_str();
  out->value_wh = r.estimate.value_wh;
  out->delta_wh = r.estimate.delta_wh;
  out->grid_resolution_wh = r.estimate.grid_resolution_wh;
  out->subset_pct = r.estimate.subset_pct;
  out->window_minutes = r.estimate.window_minutes;
  out->objective = r.estimate.objective;
  out->interval_lo_wh = r.estimate.interval_lo_wh;
  out->interval_hi_wh = r.estimate.interval_hi_wh;
  out->samples_used = r.estimate.samples_used;
  return EFL_OK;
}

efl_status efl_estimates_save(const efl_estimates* estimates, const char* path,
                              efl_format format) {
  if (!estimates || !path)
    return fail_arg("estimates and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    if (format == EFL_FORMAT_JSON)
      write_estimates_json(out, estimates->rows);
    else
      write_estimates_csv(out, estimates->rows);
  });
}

efl_status efl_estimates_to_series(const efl_estimates* estimates,
                                   efl_series** out) {
  if (!estimates || !out)
    return fail_arg("estimates and out must not be NULL");
  return guarded([&] {
    auto handle = std::make_unique<efl_series>();
    handle->groups = series_from_estimates(estimates->rows);
    fill_series_strings(handle.get());
    *out = handle.release();
  });
}

void efl_estimates_free(efl_estimates* estimates) { delete estimates; }

/* ---- series ---- */

efl_status efl_series_load_csv(const char* path,
                               const efl_ingest_options* ingest,
                               const efl_estimate_params* params, int strict,
                               efl_series** out) {
  if (!path || !out)
    return fail_arg("path and out must not be NULL");
  return guarded([&] {
    auto in = open_in(path);
    auto handle = std::make_unique<efl_series>();
    auto result = read_series_auto(in, to_ingest(ingest),
                                   to_params(params).optimization, strict != 0);
    handle->groups = std::move(result.groups);
    handle->notes = std::move(result.notes);
    fill_series_strings(handle.get());
    *out = handle.release();
  });
}

efl_status efl_series_save_csv(const efl_series* series, const char* path) {
  if (!series || !path)
    return fail_arg("series and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    write_series_csv(out, series->groups);
  });
}

size_t efl_series_group_count(const efl_series* series) {
  return series ? series->groups.size() : 0;
}

const char* efl_series_group_id(const efl_series* series, size_t group) {
  if (!series || group >= series->groups.size())
    return nullptr;
  return series->groups[group].escalator_id.c_str();
}

const char* efl_series_group_method(const efl_series* series, size_t group) {
  if (!series || group >= series->groups.size())
    return nullptr;
  return series->groups[group].method.c_str();
}

size_t efl_series_group_size(const efl_series* series, size_t group) {
  if (!series || group >= series->groups.size())
    return 0;
  return series->groups[group].points.size();
}

efl_status efl_series_point(const efl_series* series, size_t group,
                            size_t index, const char** day, double* value) {
  if (!series)
    return fail_arg("series must not be NULL");
  if (group >= series->groups.size() ||
      index >= series->groups[group].points.size())
    return fail_arg("series index out of range");
  if (day)
    *day = series->days[group][index].c_str();
  if (value)
    *value = series->groups[group].points[index].value;
  return EFL_OK;
}

size_t efl_series_note_count(const efl_series* series) {
  return series ? series->notes.size() : 0;
}

const char* efl_series_note(const efl_series* series, size_t index) {
  if (!series || index >= series->notes.size())
    return nullptr;
  return series->notes[index].c_str();
}

void efl_series_free(efl_series* series) { delete series; }

/* ---- monitoring ---- */

efl_status efl_monitor(const efl_series* series, size_t group,
                       const efl_ewma_config* config, efl_chart** out) {
  if (!series || !out)
    return fail_arg("series and out must not be NULL");
  if (group >= series->groups.size())
    return fail_arg("series group out of range");
  return guarded([&] {
    auto handle = std::make_unique<efl_chart>();
    handle->escalator_id = series->groups[group].escalator_id;
    handle->points = run_chart(series->groups[group].points, to_ewma(config));
    fill_chart_strings(handle.get());
    *out = handle.release();
  });
}

efl_status efl_chart_annotate_csv(efl_chart* chart, const char* path) {
  if (!chart || !path)
    return fail_arg("chart and path must not be NULL");
  return guarded([&] {
    auto in = open_in(path);
    std::vector<MaintenanceEvent> events;
    for (const auto& rec : read_maintenance_csv(in))
      if (rec.escalator_id == chart->escalator_id)
        events.push_back(rec.event);
    annotate_maintenance(chart->points, events);
    fill_chart_strings(chart);
  });
}

size_t efl_chart_size(const efl_chart* chart) {
  return chart ? chart->points.size() : 0;
}

size_t efl_chart_signal_count(const efl_chart* chart) {
  if (!chart)
    return 0;
  size_t n = 0;
  for (const auto& p : chart->points)
    if (p.signal)
      ++n;
  return n;
}

efl_status efl_chart_point(const efl_chart* chart, size_t index,
                           efl_chart_point_info* out) {
  if (!chart || !out)
    return fail_arg("chart and out must not be NULL");
  if (index >= chart->points.size())
    return fail_arg("chart index out of range");
  const ChartPoint& p = chart->points[index];
  out->day = chart->days[index].c_str();
  out->f_t_wh = p.f_t_wh;
  out->z_t = p.z_t;
  out->mu_w = p.mu_w;
  out->sigma_w = p.sigma_w;
  out->ucl = p.ucl;
  out->lcl = p.lcl;
  out->signal = p.signal ? 1 : 0;
  out->burn_in = p.in_burn_in ? 1 : 0;
  out->maintenance_coincident = p.maintenance_coincident ? 1 : 0;
  out->notes = chart->joined_notes[index].c_str();
  return EFL_OK;
}

efl_status efl_chart_save_csv(const efl_chart* chart, const char* path) {
  if (!chart || !path)
    return fail_arg("chart and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    write_chart_csv(out, chart->points);
  });
}

void efl_chart_free(efl_chart* chart) { delete chart; }

/* ---- labels and tuning ---- */

efl_status efl_label_extract(const efl_profiles* profiles, size_t index,
                             const efl_label_options* options, efl_label* out) {
  if (!profiles || !out)
    return fail_arg("profiles and out must not be NULL");
  if (index >= profiles->items.size())
    return fail_arg("profile index out of range");
  return guarded([&] {
    to_c_label(extract_label(profiles->items[index], to_label_options(options)),
               out);
  });
}

efl_status efl_label_load_json(const char* path, efl_label* out) {
  if (!path || !out)
    return fail_arg("path and out must not be NULL");
  return guarded([&] {
    auto in = open_in(path);
    to_c_label(read_label_json(in), out);
  });
}

efl_status efl_label_save_json(const efl_label* label, const char* path) {
  if (!label || !path)
    return fail_arg("label and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    write_label_json(out, from_c_label(*label));
  });
}

efl_status efl_experiments_new(efl_experiments** out) {
  if (!out)
    return fail_arg("out must not be NULL");
  *out = new efl_experiments();
  return EFL_OK;
}

efl_status efl_experiments_add(efl_experiments* experiments,
                               const efl_profiles* profiles, size_t index,
                               const efl_label* label) {
  if (!experiments || !profiles)
    return fail_arg("experiments and profiles must not be NULL");
  if (index >= profiles->items.size())
    return fail_arg("profile index out of range");
  return guarded([&] {
    const DailyProfile& p = profiles->items[index];
    ExperimentLabel l =
        label ? from_c_label(*label) : extract_label(p, LabelOptions{});
    experiments->items.emplace_back(p, std::move(l));
  });
}

size_t efl_experiments_count(const efl_experiments* experiments) {
  return experiments ? experiments->items.size() : 0;
}

void efl_experiments_free(efl_experiments* experiments) { delete experiments; }

efl_status efl_tune(const efl_experiments* experiments, efl_method method,
                    const double* grid, size_t grid_len, efl_curve** out) {
  if (!experiments || !grid || !out)
    return fail_arg("experiments, grid and out must not be NULL");
  return guarded([&] {
    Method m;
    if (method == EFL_METHOD_ENGINEERING)
      m = Method::Engineering;
    else if (method == EFL_METHOD_OPTIMIZATION)
      m = Method::Optimization;
    else
      throw Error(ErrorCode::Config,
                  "tunable methods are engineering and optimization");
    auto handle = std::make_unique<efl_curve>();
    handle->curve = grid_tune(experiments->items, m,
                              std::vector<double>(grid, grid + grid_len));
    *out = handle.release();
  });
}

size_t efl_curve_size(const efl_curve* curve) {
  return curve ? curve->curve.param.size() : 0;
}

efl_status efl_curve_point(const efl_curve* curve, size_t index, double* param,
                           double* mean_error, double* std_error) {
  if (!curve)
    return fail_arg("curve must not be NULL");
  if (index >= curve->curve.param.size())
    return fail_arg("curve index out of range");
  if (param)
    *param = curve->curve.param[index];
  if (mean_error)
    *mean_error = curve->curve.mean_error[index];
  if (std_error)
    *std_error = curve->curve.std_error[index];
  return EFL_OK;
}

efl_status efl_curve_save_csv(const efl_curve* curve, const char* path) {
  if (!curve || !path)
    return fail_arg("curve and path must not be NULL");
  return guarded([&] {
    auto out = open_out(path);
    write_curve_csv(out, curve->curve);
  });
}

void efl_curve_free(efl_curve* curve) { delete curve; }

/* ---- simulation ---- */

efl_status efl_scenario_load_json(const char* path, efl_scenario** out) {
  if (!path || !out)
    return fail_arg("path and out must not be NULL");
  return guarded([&] {
    auto in = open_in(path);
    auto handle = std::make_unique<efl_scenario>();
    handle->config = series_config_from_json(in);
    *out = handle.release();
  });
}

efl_status efl_scenario_preset(const char* name, efl_scenario** out) {
  if (!name || !out)
    return fail_arg("name and out must not be NULL");
  return guarded([&] {
    auto handle = std::make_unique<efl_scenario>();
    handle->config = scenario_preset(name);
    *out = handle.release();
  });
}

size_t efl_scenario_name_count(void) { return scenario_preset_names().size(); }

const char* efl_scenario_name(size_t index) {
  static const std::vector<std::string> names = scenario_preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

void efl_scenario_free(efl_scenario* scenario) { delete scenario; }

efl_status efl_simulate(const efl_scenario* scenario, int days_override,
                        const uint64_t* seed_override, efl_profiles** profiles,
                        efl_series** truth) {
  if (!scenario)
    return fail_arg("scenario must not be NULL");
  return guarded([&] {
    SeriesConfig config = scenario->config;
    if (days_override > 0)
      config.days = days_override;
    if (seed_override)
      config.base.seed = *seed_override;
    GeneratedSeries generated = generate_series(config);

    if (profiles) {
      auto handle = std::make_unique<efl_profiles>();
      handle->items = std::move(generated.profiles);
      for (const auto& p : handle->items)
        handle->days.push_back(format_date(p.day));
      *profiles = handle.release();
    }
    if (truth) {
      auto handle = std::make_unique<efl_series>();
      DailySeries s;
      s.escalator_id = config.base.escalator_id;
      for (const auto& [day, value] : generated.truth)
        s.points.push_back({day, value});
      handle->groups.push_back(std::move(s));
      fill_series_strings(handle.get());
      *truth = handle.release();
    }
  });
}

/* ---- scalar helpers ---- */

efl_status efl_ewma_update(double z_prev, double f_t, double lambda,
                           double* out) {
  if (!out)
    return fail_arg("out must not be NULL");
  return guarded([&] { *out = ewma_update(z_prev, f_t, lambda); });
}

efl_status efl_trimean(const double* values, size_t n, double* out) {
  if (!values || !out)
    return fail_arg("values and out must not be NULL");
  return guarded(
      [&] { *out = trimean(std::vector<double>(values, values + n)); });
}

efl_status efl_robust_sigma(const double* values, size_t n, double d_w,
                            double sigma_floor_wh, double* out) {
  if (!values || !out)
    return fail_arg("values and out must not be NULL");
  return guarded([&] {
    *out = robust_sigma(std::vector<double>(values, values + n), d_w,
                        sigma_floor_wh);
  });
}

efl_status efl_control_limits(double mu, double sigma_sq, double lambda,
                              double k, double* ucl, double* lcl) {
  if (!ucl || !lcl)
    return fail_arg("ucl and lcl must not be NULL");
  return guarded([&] {
    const auto [u, l] = control_limits(mu, sigma_sq, lambda, k);
    *ucl = u;
    *lcl = l;
  });
}

} // extern "C"
