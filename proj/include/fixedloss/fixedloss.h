/*
 * fixedloss - escalator fixed-loss (no-load) energy estimation and
 * EWMA-based condition monitoring.
 *
 * C API of libfixedloss. All domain objects live behind opaque handles;
 * every fallible call returns efl_status and leaves a human-readable
 * message in efl_last_error() (thread-local). Strings returned through
 * accessor structs point into the owning handle and stay valid until that
 * handle is freed or mutated.
 */

#ifndef FIXEDLOSS_FIXEDLOSS_H
#define FIXEDLOSS_FIXEDLOSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EFL_API __declspec(dllexport)
#else
#define EFL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum efl_status {
  EFL_OK = 0,
  EFL_ERR_IO = 1,
  EFL_ERR_PARSE = 2,
  EFL_ERR_VALIDATION = 3,
  EFL_ERR_INSUFFICIENT_DATA = 4,
  EFL_ERR_NO_CONVERGENCE = 5,
  EFL_ERR_CONFIG = 6,
  EFL_ERR_JOIN = 7,
  EFL_ERR_ARG = 8,
  EFL_ERR_INTERNAL = 9
} efl_status;

typedef enum efl_method {
  EFL_METHOD_CLASSICAL = 0,
  EFL_METHOD_ENGINEERING = 1,
  EFL_METHOD_OPTIMIZATION = 2,
  EFL_METHOD_ALL = 3
} efl_method;

typedef enum efl_format { EFL_FORMAT_CSV = 0, EFL_FORMAT_JSON = 1 } efl_format;

typedef struct efl_profiles efl_profiles;     /* daily minute profiles */
typedef struct efl_estimates efl_estimates;   /* per-day estimator results */
typedef struct efl_series efl_series;         /* daily fixed-loss series */
typedef struct efl_chart efl_chart;           /* EWMA chart for one series */
typedef struct efl_experiments efl_experiments; /* labelled vacant runs */
typedef struct efl_curve efl_curve;           /* parameter tuning curve */
typedef struct efl_scenario efl_scenario;     /* simulation scenario */

EFL_API const char* efl_version(void);
EFL_API const char* efl_status_name(efl_status status);
/* Message of the most recent failure on this thread ("" when none). */
EFL_API const char* efl_last_error(void);

/* Option structs: zero-initialize, then set what you need; zero or negative
 * fields fall back to the library default shown in the comment. */

typedef struct efl_ingest_options {
  int day_boundary_minutes; /* default 240 = 04:00 */
  double off_threshold_wh;  /* default 1.0 */
} efl_ingest_options;

typedef struct efl_estimate_params {
  double delta_wh;           /* optimization proximity band, default 0.3 */
  double grid_resolution_wh; /* optimization grid step, default 0.01 */
  double subset_pct;         /* engineering subset size, default 5 */
} efl_estimate_params;

typedef struct efl_label_options {
  int ma_window;    /* default 5 minutes */
  double tol_wh;    /* default 0.1 */
  int hold_minutes; /* default 10 */
} efl_label_options;

typedef struct efl_ewma_config {
  double lambda;          /* default 0.25 */
  double k;               /* default 2.924 */
  int window_days;        /* default 30 */
  double d_w;             /* default 0.779 */
  double sigma_floor_wh;  /* default 0.05 */
  int sigma_convention;   /* 0: variance = IQR/d_w, 1: sigma = IQR/1.349 */
} efl_ewma_config;

/* ---- minute profiles ---------------------------------------------------- */

typedef struct efl_profile_info {
  const char* escalator_id;
  const char* day; /* YYYY-MM-DD, date of the boundary starting the day */
  int direction_up;
  size_t n_samples;
  int n_operating;
} efl_profile_info;

EFL_API efl_status efl_profiles_load_csv(const char* path,
                                         const efl_ingest_options* options,
                                         efl_profiles** out);
EFL_API efl_status efl_profiles_save_csv(const efl_profiles* profiles,
                                         const char* path,
                                         const efl_ingest_options* options);
EFL_API size_t efl_profiles_count(const efl_profiles* profiles);
EFL_API efl_status efl_profiles_info(const efl_profiles* profiles,
                                     size_t index, efl_profile_info* out);
EFL_API void efl_profiles_free(efl_profiles* profiles);

/* ---- estimation --------------------------------------------------------- */

typedef struct efl_estimate_info {
  const char* escalator_id;
  const char* day;
  efl_method method;
  int ok;            /* 0: this day failed, see `error` */
  const char* error; /* "" when ok */
  double value_wh;
  double delta_wh;
  double grid_resolution_wh;
  double subset_pct;
  int window_minutes;
  long objective;
  double interval_lo_wh;
  double interval_hi_wh;
  int samples_used;
} efl_estimate_info;

/* One row per (profile, method). In non-strict mode a day that cannot be
 * estimated produces an error-marked row instead of failing the call. */
EFL_API efl_status efl_estimate(const efl_profiles* profiles, efl_method method,
                                const efl_estimate_params* params, int strict,
                                efl_estimates** out);
EFL_API size_t efl_estimates_count(const efl_estimates* estimates);
EFL_API size_t efl_estimates_error_count(const efl_estimates* estimates);
EFL_API efl_status efl_estimates_info(const efl_estimates* estimates,
                                      size_t index, efl_estimate_info* out);
EFL_API efl_status efl_estimates_save(const efl_estimates* estimates,
                                      const char* path, efl_format format);
EFL_API efl_status efl_estimates_to_series(const efl_estimates* estimates,
                                           efl_series** out);
EFL_API void efl_estimates_free(efl_estimates* estimates);

/* ---- daily series -------------------------------------------------------- */

/* Loads a daily fixed-loss series. Accepts the plain series schema
 * (escalator_id,day,f_t_wh), the estimates CSV schema, or raw minute data
 * (in which case the optimization estimator produces the series; days that
 * cannot be estimated are skipped unless strict). Groups are per escalator
 * and, for estimate-derived input, per method. */
EFL_API efl_status efl_series_load_csv(const char* path,
                                       const efl_ingest_options* ingest,
                                       const efl_estimate_params* params,
                                       int strict, efl_series** out);
EFL_API efl_status efl_series_save_csv(const efl_series* series,
                                       const char* path);
EFL_API size_t efl_series_group_count(const efl_series* series);
EFL_API const char* efl_series_group_id(const efl_series* series, size_t group);
EFL_API const char* efl_series_group_method(const efl_series* series,
                                            size_t group);
EFL_API size_t efl_series_group_size(const efl_series* series, size_t group);
EFL_API efl_status efl_series_point(const efl_series* series, size_t group,
                                    size_t index, const char** day,
                                    double* value);
/* Days skipped while deriving the series from raw input. */
EFL_API size_t efl_series_note_count(const efl_series* series);
EFL_API const char* efl_series_note(const efl_series* series, size_t index);
EFL_API void efl_series_free(efl_series* series);

/* ---- monitoring ---------------------------------------------------------- */

typedef struct efl_chart_point_info {
  const char* day;
  double f_t_wh;
  double z_t;     /* NaN during burn-in, likewise the four fields below */
  double mu_w;
  double sigma_w;
  double ucl;
  double lcl;
  int signal;
  int burn_in;
  int maintenance_coincident;
  const char* notes; /* "; "-joined maintenance notes, "" if none */
} efl_chart_point_info;

EFL_API efl_status efl_monitor(const efl_series* series, size_t group,
                               const efl_ewma_config* config, efl_chart** out);
/* Attaches events from a maintenance CSV (escalator_id,day,note) whose id
 * matches the monitored series and flags signals within +-3 days of one. */
EFL_API efl_status efl_chart_annotate_csv(efl_chart* chart, const char* path);
EFL_API size_t efl_chart_size(const efl_chart* chart);
EFL_API size_t efl_chart_signal_count(const efl_chart* chart);
EFL_API efl_status efl_chart_point(const efl_chart* chart, size_t index,
                                   efl_chart_point_info* out);
EFL_API efl_status efl_chart_save_csv(const efl_chart* chart, const char* path);
EFL_API void efl_chart_free(efl_chart* chart);

/* ---- experiment labels and tuning ---------------------------------------- */

typedef struct efl_label {
  char escalator_id[64];
  char day[16];
  double f_experiment_wh;
  int convergence_minute;
} efl_label;

EFL_API efl_status efl_label_extract(const efl_profiles* profiles, size_t index,
                                     const efl_label_options* options,
                                     efl_label* out);
EFL_API efl_status efl_label_load_json(const char* path, efl_label* out);
EFL_API efl_status efl_label_save_json(const efl_label* label,
                                       const char* path);

EFL_API efl_status efl_experiments_new(efl_experiments** out);
/* Adds profile `index` with its label; pass label = NULL to extract one from
 * the profile with default options. */
EFL_API efl_status efl_experiments_add(efl_experiments* experiments,
                                       const efl_profiles* profiles,
                                       size_t index, const efl_label* label);
EFL_API size_t efl_experiments_count(const efl_experiments* experiments);
EFL_API void efl_experiments_free(efl_experiments* experiments);

/* Grid values are deltas for EFL_METHOD_OPTIMIZATION and subset percentages
 * for EFL_METHOD_ENGINEERING. */
EFL_API efl_status efl_tune(const efl_experiments* experiments,
                            efl_method method, const double* grid,
                            size_t grid_len, efl_curve** out);
EFL_API size_t efl_curve_size(const efl_curve* curve);
/* std_error is NaN where it is undefined (single experiment). */
EFL_API efl_status efl_curve_point(const efl_curve* curve, size_t index,
                                   double* param, double* mean_error,
                                   double* std_error);
EFL_API efl_status efl_curve_save_csv(const efl_curve* curve, const char* path);
EFL_API void efl_curve_free(efl_curve* curve);

/* ---- simulation ----------------------------------------------------------- */

EFL_API efl_status efl_scenario_load_json(const char* path, efl_scenario** out);
EFL_API efl_status efl_scenario_preset(const char* name, efl_scenario** out);
/* Names of the built-in presets; static storage, do not free. */
EFL_API size_t efl_scenario_name_count(void);
EFL_API const char* efl_scenario_name(size_t index);
EFL_API void efl_scenario_free(efl_scenario* scenario);

/* Generates the scenario's day series and its ground-truth fixed loss.
 * days_override > 0 replaces the scenario's day count; seed_override, when
 * non-NULL, replaces its seed. Either output pointer may be NULL. */
EFL_API efl_status efl_simulate(const efl_scenario* scenario, int days_override,
                                const uint64_t* seed_override,
                                efl_profiles** profiles, efl_series** truth);

/* ---- chart arithmetic (stateless helpers) --------------------------------- */

EFL_API efl_status efl_ewma_update(double z_prev, double f_t, double lambda,
                                   double* out);
EFL_API efl_status efl_trimean(const double* values, size_t n, double* out);
/* "paper" convention: variance = max(IQR/d_w, floor^2); returns sigma. */
EFL_API efl_status efl_robust_sigma(const double* values, size_t n, double d_w,
                                    double sigma_floor_wh, double* out);
EFL_API efl_status efl_control_limits(double mu, double sigma_sq, double lambda,
                                      double k, double* ucl, double* lcl);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FIXEDLOSS_FIXEDLOSS_H */
