// fixedloss - command-line front end over libfixedloss's C API.
//
// Subcommands: simulate, estimate, tune, monitor. Exit codes: 0 success,
// 1 runtime failure, 2 usage/config error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fixedloss/fixedloss.h>

namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CommandError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) {
  throw CommandError{code, message};
}

int exit_code_for(efl_status status) {
  return status == EFL_ERR_INTERNAL ? kExitFailure : kExitUsage;
}

void check(efl_status status) {
  if (status != EFL_OK)
    die(exit_code_for(status), std::string(efl_status_name(status)) + ": " +
                                   efl_last_error());
}

template <typename T, void (*Free)(T*)> struct Handle {
  T* ptr = nullptr;
  ~Handle() {
    if (ptr)
      Free(ptr);
  }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using ProfilesHandle = Handle<efl_profiles, efl_profiles_free>;
using EstimatesHandle = Handle<efl_estimates, efl_estimates_free>;
using SeriesHandle = Handle<efl_series, efl_series_free>;
using ChartHandle = Handle<efl_chart, efl_chart_free>;
using ScenarioHandle = Handle<efl_scenario, efl_scenario_free>;
using ExperimentsHandle = Handle<efl_experiments, efl_experiments_free>;
using CurveHandle = Handle<efl_curve, efl_curve_free>;

struct GlobalOptions {
  std::string out;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::string day_boundary = "04:00";
  double off_threshold = 0.0; // 0 -> library default
};

efl_ingest_options ingest_options(const GlobalOptions& global) {
  int hh = 0, mm = 0;
  char tail = 0;
  if (std::sscanf(global.day_boundary.c_str(), "%2d:%2d%c", &hh, &mm, &tail) !=
          2 ||
      hh < 0 || hh > 23 || mm < 0 || mm > 59)
    die(kExitUsage, "--day-boundary must be HH:MM");
  efl_ingest_options options{};
  options.day_boundary_minutes = hh * 60 + mm;
  options.off_threshold_wh = global.off_threshold;
  return options;
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char ch : name)
    out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-';
  return out.empty() ? std::string("series") : out;
}

efl_method method_from_flag(const std::string& name) {
  if (name == "classical")
    return EFL_METHOD_CLASSICAL;
  if (name == "engineering")
    return EFL_METHOD_ENGINEERING;
  if (name == "optimization")
    return EFL_METHOD_OPTIMIZATION;
  if (name == "all")
    return EFL_METHOD_ALL;
  die(kExitUsage, "unknown method '" + name + "'");
}

// "0.1,0.2,0.3" or "0.1:1.0:0.1"
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &tail) !=
            3 ||
        step <= 0 || hi < lo)
      die(kExitUsage, "grid range must be lo:hi:step with step > 0");
    for (double v = lo; v <= hi + step * 1e-9; v += step)
      grid.push_back(v);
    return grid;
  }
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty())
      continue;
    size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      die(kExitUsage, "bad grid value '" + item + "'");
    }
    if (used != item.size())
      die(kExitUsage, "bad grid value '" + item + "'");
    grid.push_back(v);
  }
  return grid;
}

// ---- simulate ----

struct SimulateArgs {
  std::string preset;
  std::string scenario_file;
  int days = 0;
};

int cmd_simulate(const GlobalOptions& global, const SimulateArgs& args) {
  if (args.preset.empty() == args.scenario_file.empty())
    die(kExitUsage, "pass exactly one of --preset or --scenario");
  if (global.out.empty())
    die(kExitUsage, "--out DIR is required");

  ScenarioHandle scenario;
  if (!args.preset.empty())
    check(efl_scenario_preset(args.preset.c_str(), scenario.out()));
  else
    check(efl_scenario_load_json(args.scenario_file.c_str(), scenario.out()));

  ProfilesHandle profiles;
  SeriesHandle truth;
  const std::uint64_t seed = global.seed.value_or(0);
  check(efl_simulate(scenario.get(), args.days, global.seed ? &seed : nullptr,
                     profiles.out(), truth.out()));

  fs::create_directories(global.out);
  const fs::path dir(global.out);
  const auto ingest = ingest_options(global);
  check(efl_profiles_save_csv(profiles.get(), (dir / "profiles.csv").c_str(),
                              &ingest));
  check(efl_series_save_csv(truth.get(), (dir / "truth.csv").c_str()));
  std::cout << "simulated " << efl_profiles_count(profiles.get())
            << " day(s) -> " << (dir / "profiles.csv").string() << ", "
            << (dir / "truth.csv").string() << "\n";
  return 0;
}

// ---- estimate ----

struct EstimateArgs {
  std::string input;
  std::string method = "all";
  double delta = 0.0;
  double grid_resolution = 0.0;
  double subset_pct = 0.0;
};

int cmd_estimate(const GlobalOptions& global, const EstimateArgs& args) {
  if (global.out.empty())
    die(kExitUsage, "--out FILE is required");
  const auto ingest = ingest_options(global);
  ProfilesHandle profiles;
  check(efl_profiles_load_csv(args.input.c_str(), &ingest, profiles.out()));
  if (efl_profiles_count(profiles.get()) == 0)
    die(kExitUsage, "no usable days in '" + args.input + "'");

  efl_estimate_params params{};
  params.delta_wh = args.delta;
  params.grid_resolution_wh = args.grid_resolution;
  params.subset_pct = args.subset_pct;

  EstimatesHandle estimates;
  check(efl_estimate(profiles.get(), method_from_flag(args.method), &params,
                     global.strict ? 1 : 0, estimates.out()));
  check(efl_estimates_save(estimates.get(), global.out.c_str(),
                           global.format == "json" ? EFL_FORMAT_JSON
                                                   : EFL_FORMAT_CSV));

  const size_t failed = efl_estimates_error_count(estimates.get());
  std::cout << "estimated " << efl_estimates_count(estimates.get())
            << " row(s), " << failed << " failed -> " << global.out << "\n";
  if (failed > 0) {
    for (size_t i = 0; i < efl_estimates_count(estimates.get()); ++i) {
      efl_estimate_info info{};
      check(efl_estimates_info(estimates.get(), i, &info));
      if (!info.ok)
        std::cerr << "  " << info.escalator_id << " " << info.day << ": "
                  << info.error << "\n";
    }
  }
  return 0;
}

// ---- tune ----

struct TuneArgs {
  std::string experiments_dir;
  std::string method = "optimization";
  std::string grid;
  int ma_window = 0;
  double tol = 0.0;
  int hold = 0;
};

int cmd_tune(const GlobalOptions& global, const TuneArgs& args) {
  if (global.out.empty())
    die(kExitUsage, "--out FILE is required");
  const efl_method method = method_from_flag(args.method);
  if (method != EFL_METHOD_ENGINEERING && method != EFL_METHOD_OPTIMIZATION)
    die(kExitUsage, "tunable methods are engineering and optimization");

  std::vector<double> grid;
  if (!args.grid.empty())
    grid = parse_grid(args.grid);
  else if (method == EFL_METHOD_OPTIMIZATION)
    grid = parse_grid("0.1:1.0:0.1");
  else
    grid = parse_grid("1:10:1");
  if (grid.empty())
    die(kExitUsage, "the tuning grid is empty");

  if (!fs::is_directory(args.experiments_dir))
    die(kExitUsage, "'" + args.experiments_dir + "' is not a directory");

  std::vector<fs::path> profile_files;
  std::map<std::string, fs::path> label_files;
  for (const auto& entry : fs::directory_iterator(args.experiments_dir)) {
    if (!entry.is_regular_file())
      continue;
    const fs::path path = entry.path();
    const std::string name = path.filename().string();
    if (name.size() > 11 && name.ends_with(".label.json"))
      label_files[name.substr(0, name.size() - 11)] = path;
    else if (path.extension() == ".csv")
      profile_files.push_back(path);
  }
  std::sort(profile_files.begin(), profile_files.end());
  if (profile_files.empty())
    die(kExitUsage, "no experiment CSVs in '" + args.experiments_dir + "'");

  const auto ingest = ingest_options(global);
  efl_label_options label_options{};
  label_options.ma_window = args.ma_window;
  label_options.tol_wh = args.tol;
  label_options.hold_minutes = args.hold;

  ExperimentsHandle experiments;
  check(efl_experiments_new(experiments.out()));
  std::map<std::string, bool> used_labels;
  for (const auto& path : profile_files) {
    ProfilesHandle profiles;
    check(efl_profiles_load_csv(path.c_str(), &ingest, profiles.out()));
    if (efl_profiles_count(profiles.get()) != 1)
      die(kExitUsage, "experiment file '" + path.string() +
                          "' must hold exactly one escalator-day");
    const std::string stem = path.stem().string();
    const auto label_it = label_files.find(stem);
    efl_label label{};
    if (label_it != label_files.end()) {
      check(efl_label_load_json(label_it->second.c_str(), &label));
      check(efl_experiments_add(experiments.get(), profiles.get(), 0, &label));
      used_labels[stem] = true;
    } else {
      check(efl_label_extract(profiles.get(), 0, &label_options, &label));
      check(efl_experiments_add(experiments.get(), profiles.get(), 0, &label));
    }
  }
  std::string orphans;
  for (const auto& [stem, path] : label_files)
    if (!used_labels.count(stem))
      orphans += " " + path.filename().string();
  if (!orphans.empty())
    die(kExitUsage, "label files without a matching profile CSV:" + orphans);

  CurveHandle curve;
  check(efl_tune(experiments.get(), method, grid.data(), grid.size(),
                 curve.out()));
  check(efl_curve_save_csv(curve.get(), global.out.c_str()));
  std::cout << "tuned " << args.method << " over " << grid.size()
            << " grid value(s), " << efl_experiments_count(experiments.get())
            << " experiment(s) -> " << global.out << "\n";
  return 0;
}

// ---- monitor ----

struct MonitorArgs {
  std::string input;
  std::string maintenance;
  double lambda = 0.0;
  double k = 0.0;
  int window = 0;
  double d_w = 0.0;
  double sigma_floor = 0.0;
  std::string sigma_convention = "paper";
  double delta = 0.0; // for raw minute input
};

int cmd_monitor(const GlobalOptions& global, const MonitorArgs& args) {
  if (global.out.empty())
    die(kExitUsage, "--out PREFIX is required");
  if (args.sigma_convention != "paper" && args.sigma_convention != "deviation")
    die(kExitUsage, "--sigma-convention must be paper or deviation");

  const auto ingest = ingest_options(global);
  efl_estimate_params params{};
  params.delta_wh = args.delta;
  SeriesHandle series;
  check(efl_series_load_csv(args.input.c_str(), &ingest, &params,
                            global.strict ? 1 : 0, series.out()));
  for (size_t i = 0; i < efl_series_note_count(series.get()); ++i)
    std::cerr << "skipped: " << efl_series_note(series.get(), i) << "\n";

  const size_t groups = efl_series_group_count(series.get());
  if (groups == 0)
    die(kExitUsage, "no monitorable series in '" + args.input + "'");

  efl_ewma_config config{};
  config.lambda = args.lambda;
  config.k = args.k;
  config.window_days = args.window;
  config.d_w = args.d_w;
  config.sigma_floor_wh = args.sigma_floor;
  config.sigma_convention = args.sigma_convention == "deviation" ? 1 : 0;
  const int window_days = args.window > 0 ? args.window : 30;

  std::ostringstream summary;
  for (size_t g = 0; g < groups; ++g) {
    const std::string id = efl_series_group_id(series.get(), g);
    const std::string method = efl_series_group_method(series.get(), g);
    const size_t len = efl_series_group_size(series.get(), g);
    if (len < size_t(window_days) + 1)
      die(kExitUsage, "series " + id +
                          (method.empty() ? "" : " (" + method + ")") +
                          " has " + std::to_string(len) +
                          " day(s); monitoring needs at least " +
                          std::to_string(window_days + 1));

    ChartHandle chart;
    check(efl_monitor(series.get(), g, &config, chart.out()));
    if (!args.maintenance.empty())
      check(efl_chart_annotate_csv(chart.get(), args.maintenance.c_str()));

    std::string out_path = global.out + "_" + sanitize(id);
    if (!method.empty())
      out_path += "_" + sanitize(method);
    out_path += ".csv";
    check(efl_chart_save_csv(chart.get(), out_path.c_str()));

    summary << "escalator " << id;
    if (!method.empty())
      summary << " (" << method << ")";
    summary << ": " << len << " day(s), "
            << efl_chart_signal_count(chart.get()) << " signal(s) -> "
            << out_path << "\n";
    for (size_t i = 0; i < efl_chart_size(chart.get()); ++i) {
      efl_chart_point_info p{};
      check(efl_chart_point(chart.get(), i, &p));
      if (!p.signal)
        continue;
      summary << "  signal " << p.day << " z=" << p.z_t << " limits=["
              << p.lcl << ", " << p.ucl << "]";
      if (p.maintenance_coincident)
        summary << " maintenance-coincident";
      if (p.notes[0] != '\0')
        summary << " notes: " << p.notes;
      summary << "\n";
    }
  }

  std::ofstream summary_file(global.out + "_summary.txt");
  if (!summary_file)
    die(kExitUsage, "cannot write summary next to '" + global.out + "'");
  summary_file << summary.str();
  std::cout << summary.str();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"escalator fixed-loss estimation and EWMA monitoring"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--out", global.out, "output file, prefix or directory");
  app.add_option("--format", global.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", global.seed, "override the scenario seed");
  app.add_flag("--strict", global.strict, "fail on the first bad day");
  app.add_option("--day-boundary", global.day_boundary,
                 "working-day boundary, HH:MM (default 04:00)");
  app.add_option("--off-threshold", global.off_threshold,
                 "operating threshold in Wh (default 1.0)");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand(
      "simulate", "generate synthetic daily profiles with known fixed loss");
  simulate->add_option("--preset", simulate_args.preset,
                       "built-in scenario: busy-last-hour, energy-saving, "
                       "multi-startup, maintenance");
  simulate->add_option("--scenario", simulate_args.scenario_file,
                       "scenario JSON file");
  simulate->add_option("--days", simulate_args.days,
                       "number of days (overrides the scenario)");

  EstimateArgs estimate_args;
  auto* estimate = app.add_subcommand(
      "estimate", "estimate the daily fixed loss from minute data");
  estimate->add_option("input", estimate_args.input, "minute CSV file")
      ->required();
  estimate->add_option("--method", estimate_args.method,
                       "classical, engineering, optimization or all");
  estimate->add_option("--delta", estimate_args.delta,
                       "optimization proximity band (default 0.3)");
  estimate->add_option("--grid-resolution", estimate_args.grid_resolution,
                       "optimization grid step (default 0.01)");
  estimate->add_option("--subset-pct", estimate_args.subset_pct,
                       "engineering subset percentage (default 5)");

  TuneArgs tune_args;
  auto* tune = app.add_subcommand(
      "tune", "sweep an estimator parameter over labelled experiments");
  tune->add_option("--experiments", tune_args.experiments_dir,
                   "directory of experiment CSVs (+ optional NAME.label.json)")
      ->required();
  tune->add_option("--method", tune_args.method, "engineering or optimization");
  tune->add_option("--grid", tune_args.grid,
                   "comma list or lo:hi:step (defaults: 0.1:1.0:0.1 for "
                   "optimization, 1:10:1 for engineering)");
  tune->add_option("--ma-window", tune_args.ma_window,
                   "label moving-average window (default 5)");
  tune->add_option("--tol", tune_args.tol,
                   "label convergence tolerance in Wh (default 0.1)");
  tune->add_option("--hold", tune_args.hold,
                   "label convergence hold in minutes (default 10)");

  MonitorArgs monitor_args;
  auto* monitor = app.add_subcommand(
      "monitor", "run the EWMA chart over a daily fixed-loss series");
  monitor
      ->add_option("input", monitor_args.input,
                   "fixed-loss series CSV, estimates CSV, or raw minute CSV")
      ->required();
  monitor->add_option("--maintenance", monitor_args.maintenance,
                      "maintenance CSV (escalator_id,day,note)");
  monitor->add_option("--lambda", monitor_args.lambda,
                      "EWMA weight (default 0.25)");
  monitor->add_option("--k", monitor_args.k,
                      "limit multiplier (default 2.924)");
  monitor->add_option("--window", monitor_args.window,
                      "moving window in days (default 30)");
  monitor->add_option("--dw", monitor_args.d_w,
                      "IQR unbiasing constant (default 0.779)");
  monitor->add_option("--sigma-floor", monitor_args.sigma_floor,
                      "sigma floor in Wh (default 0.05)");
  monitor->add_option("--sigma-convention", monitor_args.sigma_convention,
                      "paper or deviation (default paper)");
  monitor->add_option("--delta", monitor_args.delta,
                      "optimization delta for raw input (default 0.3)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(global, simulate_args);
    if (estimate->parsed())
      return cmd_estimate(global, estimate_args);
    if (tune->parsed())
      return cmd_tune(global, tune_args);
    return cmd_monitor(global, monitor_args);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
