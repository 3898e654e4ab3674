#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end tests that drive the installed binary the way a user would.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() {
#ifdef FIXEDLOSS_CLI_PATH
  return FIXEDLOSS_CLI_PATH;
#else
  return "fixedloss";
#endif
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("efl-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const {
    return (path / name).string();
  }
};

int run(const std::string& args, const std::string& log = "/dev/null") {
  const std::string cmd =
      std::string(cli_path()) + " " + args + " >" + log + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

} // namespace

TEST_CASE("usage errors exit with 2") {
  TempDir tmp;
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("simulate --out " + (tmp / "x")) == 2); // no preset/scenario
  CHECK(run("simulate --preset busy-last-hour") == 2); // no --out
  CHECK(run("simulate --preset nope --out " + (tmp / "x")) == 2);
  CHECK(run("estimate " + (tmp / "missing.csv") + " --out " + (tmp / "e")) ==
        2);
  CHECK(run("--help") == 0);

  // header-only input has no usable days
  {
    std::ofstream empty(tmp / "empty.csv");
    empty << "escalator_id,timestamp,direction,energy_wh\n";
  }
  CHECK(run("estimate " + (tmp / "empty.csv") + " --out " + (tmp / "e")) == 2);
  CHECK(run("monitor " + (tmp / "empty.csv") + " --out " + (tmp / "c")) == 2);

  // an explicitly empty tuning grid
  fs::create_directories(tmp / "expdir");
  CHECK(run("tune --experiments " + (tmp / "expdir") +
            " --grid , --out " + (tmp / "t.csv")) == 2);
}

TEST_CASE("simulate is deterministic per seed") {
  TempDir tmp;
  REQUIRE(run("simulate --preset maintenance --days 3 --seed 9 --out " +
              (tmp / "a")) == 0);
  REQUIRE(run("simulate --preset maintenance --days 3 --seed 9 --out " +
              (tmp / "b")) == 0);
  REQUIRE(run("simulate --preset maintenance --days 3 --seed 10 --out " +
              (tmp / "c")) == 0);
  CHECK(slurp(tmp / "a/profiles.csv") == slurp(tmp / "b/profiles.csv"));
  CHECK(slurp(tmp / "a/truth.csv") == slurp(tmp / "b/truth.csv"));
  CHECK(slurp(tmp / "a/profiles.csv") != slurp(tmp / "c/profiles.csv"));
}

TEST_CASE("simulate accepts a scenario file and honors --days") {
  TempDir tmp;
  {
    std::ofstream scenario(tmp / "scenario.json");
    scenario << R"({"escalator_id":"unit-7","direction":"up","f_true_wh":60,
                    "operate_from":100,"operate_to":1200,"seed":5,"days":4})";
  }
  REQUIRE(run("simulate --scenario " + (tmp / "scenario.json") + " --out " +
              (tmp / "sim")) == 0);
  std::istringstream truth(slurp(tmp / "sim/truth.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(truth, line))
    if (!line.empty())
      ++rows;
  CHECK(rows == 5); // header + 4 days

  REQUIRE(run("simulate --scenario " + (tmp / "scenario.json") +
              " --days 1 --out " + (tmp / "sim1")) == 0);
  std::istringstream one(slurp(tmp / "sim1/truth.csv"));
  rows = 0;
  while (std::getline(one, line))
    if (!line.empty())
      ++rows;
  CHECK(rows == 2);
}

TEST_CASE("estimate: per-day errors are isolated unless --strict") {
  TempDir tmp;
  {
    // one good day and one with too few operating minutes for any method
    std::ofstream csv(tmp / "mixed.csv");
    csv << "escalator_id,timestamp,direction,energy_wh\n";
    for (int t = 0; t < 120; ++t) {
      char stamp[32];
      std::snprintf(stamp, sizeof(stamp), "2021-03-01T%02d:%02d", (300 + t) / 60,
                    (300 + t) % 60);
      csv << "esc-1," << stamp << ",up,50\n";
    }
    for (int t = 0; t < 10; ++t) {
      char stamp[32];
      std::snprintf(stamp, sizeof(stamp), "2021-03-02T%02d:%02d", (300 + t) / 60,
                    (300 + t) % 60);
      csv << "esc-1," << stamp << ",up,50\n";
    }
  }
  REQUIRE(run("estimate " + (tmp / "mixed.csv") + " --method all --out " +
              (tmp / "est.csv")) == 0);
  const std::string est = slurp(tmp / "est.csv");
  CHECK(est.find("insufficient") != std::string::npos);
  CHECK(est.find("2021-03-01,classical,50") != std::string::npos);

  CHECK(run("estimate " + (tmp / "mixed.csv") + " --method all --strict "
            "--out " + (tmp / "strict.csv")) == 2);
}

TEST_CASE("estimate writes json when asked") {
  TempDir tmp;
  REQUIRE(run("simulate --preset busy-last-hour --days 1 --out " +
              (tmp / "sim")) == 0);
  REQUIRE(run("estimate " + (tmp / "sim/profiles.csv") +
              " --method optimization --format json --out " +
              (tmp / "est.json")) == 0);
  const std::string est = slurp(tmp / "est.json");
  CHECK(est.find("\"method\": \"optimization\"") != std::string::npos);
  CHECK(est.find("\"delta_wh\": 0.3") != std::string::npos);
}

TEST_CASE("constant profile gives three matching estimates") {
  TempDir tmp;
  {
    std::ofstream scenario(tmp / "flat.json");
    scenario << R"({"escalator_id":"flat","f_true_wh":42,"operate_from":90,
                    "operate_to":1260,"seed":3})";
  }
  REQUIRE(run("simulate --scenario " + (tmp / "flat.json") + " --out " +
              (tmp / "sim")) == 0);
  REQUIRE(run("estimate " + (tmp / "sim/profiles.csv") + " --method all "
              "--out " + (tmp / "est.csv")) == 0);
  const std::string est = slurp(tmp / "est.csv");
  CHECK(est.find("classical,42,") != std::string::npos);
  CHECK(est.find("engineering,42,") != std::string::npos);
  // optimization settles delta/2 under the level
  CHECK(est.find("optimization,41.85") != std::string::npos);
}

TEST_CASE("tune: defaults, orphans, single-point grids") {
  TempDir tmp;
  const std::string dir = tmp / "experiments";
  fs::create_directories(dir);
  for (int i = 0; i < 3; ++i) {
    std::ofstream csv(dir + "/exp" + std::to_string(i) + ".csv");
    csv << "escalator_id,timestamp,direction,energy_wh\n";
    for (int t = 0; t < 150; ++t) {
      char stamp[32];
      std::snprintf(stamp, sizeof(stamp), "2021-03-0%dT%02d:%02d", i + 1,
                    (90 + t) / 60, (90 + t) % 60);
      csv << "exp-" << i << "," << stamp << ",up,"
          << 45.0 + 8.0 * std::exp(-double(t) / 12.0) << "\n";
    }
  }

  REQUIRE(run("tune --experiments " + dir + " --method optimization --out " +
              (tmp / "curve.csv")) == 0);
  std::istringstream curve(slurp(tmp / "curve.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(curve, line))
    if (!line.empty())
      ++rows;
  CHECK(rows == 11); // header + default ten deltas

  REQUIRE(run("tune --experiments " + dir + " --method engineering "
              "--grid 5 --out " + (tmp / "single.csv")) == 0);
  std::istringstream single(slurp(tmp / "single.csv"));
  rows = 0;
  while (std::getline(single, line))
    if (!line.empty())
      ++rows;
  CHECK(rows == 2);

  // a label file with no matching CSV is an orphan
  {
    std::ofstream orphan(dir + "/ghost.label.json");
    orphan << R"({"escalator_id":"g","day":"2021-01-01","f_experiment_wh":45})";
  }
  CHECK(run("tune --experiments " + dir + " --method optimization --out " +
            (tmp / "x.csv"), tmp / "orphan.log") == 2);
  CHECK(slurp(tmp / "orphan.log").find("ghost.label.json") !=
        std::string::npos);
}

TEST_CASE("monitor: series input, signals and maintenance annotation") {
  TempDir tmp;
  {
    std::ofstream csv(tmp / "series.csv");
    csv << "escalator_id,day,f_t_wh\n";
    for (int d = 0; d < 60; ++d) {
      char day[16];
      std::snprintf(day, sizeof(day), "2021-%02d-%02d", 3 + d / 28,
                    1 + d % 28);
      csv << "esc-9," << day << "," << (d >= 45 ? 49.0 : 45.0) << "\n";
    }
  }
  {
    std::ofstream maint(tmp / "maintenance.csv");
    maint << "escalator_id,day,note\n";
    maint << "esc-9,2021-04-18,brake renewal\n";
  }
  REQUIRE(run("monitor " + (tmp / "series.csv") + " --maintenance " +
              (tmp / "maintenance.csv") + " --out " + (tmp / "chart"),
              tmp / "monitor.log") == 0);
  const std::string log = slurp(tmp / "monitor.log");
  CHECK(log.find("signal") != std::string::npos);
  CHECK(log.find("maintenance-coincident") != std::string::npos);
  const std::string chart = slurp(tmp / "chart_esc-9.csv");
  CHECK(chart.rfind("day,f_t_wh,z_t", 0) == 0);
  CHECK(chart.find("brake renewal") != std::string::npos);
  CHECK(slurp(tmp / "chart_summary.txt") == log);
}

TEST_CASE("monitor: a constant 400-day series yields zero signals") {
  TempDir tmp;
  {
    std::ofstream csv(tmp / "flat.csv");
    csv << "escalator_id,day,f_t_wh\n";
    int y = 2021, m = 1, d = 1;
    const auto days_in = [](int year, int month) {
      static const int lengths[] = {31, 28, 31, 30, 31, 30,
                                    31, 31, 30, 31, 30, 31};
      if (month == 2 && year % 4 == 0 && (year % 100 != 0 || year % 400 == 0))
        return 29;
      return lengths[month - 1];
    };
    for (int i = 0; i < 400; ++i) {
      char day[16];
      std::snprintf(day, sizeof(day), "%04d-%02d-%02d", y, m, d);
      csv << "esc-flat," << day << ",45\n";
      if (++d > days_in(y, m)) {
        d = 1;
        if (++m > 12) {
          m = 1;
          ++y;
        }
      }
    }
  }
  REQUIRE(run("monitor " + (tmp / "flat.csv") + " --out " + (tmp / "chart"),
              tmp / "log.txt") == 0);
  CHECK(slurp(tmp / "log.txt").find("400 day(s), 0 signal(s)") !=
        std::string::npos);
}

TEST_CASE("monitor rejects series shorter than window + 1") {
  TempDir tmp;
  {
    std::ofstream csv(tmp / "short.csv");
    csv << "escalator_id,day,f_t_wh\n";
    for (int d = 1; d <= 30; ++d) {
      char day[16];
      std::snprintf(day, sizeof(day), "2021-03-%02d", d);
      csv << "esc-1," << day << ",45\n";
    }
  }
  CHECK(run("monitor " + (tmp / "short.csv") + " --out " + (tmp / "c")) == 2);
  // a smaller window makes the same series monitorable
  CHECK(run("monitor " + (tmp / "short.csv") + " --window 20 --out " +
            (tmp / "c")) == 0);
}

TEST_CASE("pipeline: simulate -> estimate -> monitor, byte-stable") {
  TempDir tmp;
  for (const char* leg : {"x", "y"}) {
    const std::string dir = tmp / leg;
    fs::create_directories(dir);
    REQUIRE(run("simulate --preset energy-saving --days 40 --seed 77 --out " +
                dir + "/sim") == 0);
    REQUIRE(run("estimate " + dir + "/sim/profiles.csv --method all --out " +
                dir + "/est.csv") == 0);
    REQUIRE(run("monitor " + dir + "/est.csv --out " + dir + "/chart") == 0);
    REQUIRE(run("monitor " + dir + "/sim/profiles.csv --out " + dir +
                "/rawchart") == 0);
  }
  for (const char* file :
       {"est.csv", "chart_sim-saving_optimization.csv",
        "chart_sim-saving_classical.csv",
        "rawchart_sim-saving_optimization.csv"}) {
    CHECK(slurp((tmp / "x") + ("/" + std::string(file))) ==
          slurp((tmp / "y") + ("/" + std::string(file))));
  }
  // raw-input monitoring equals monitoring the estimates file
  CHECK(slurp((tmp / "x") + "/rawchart_sim-saving_optimization.csv") ==
        slurp((tmp / "x") + "/chart_sim-saving_optimization.csv"));

  // rerunning with identical arguments reproduces the summary bytes too
  const std::string snapshot = slurp((tmp / "x") + "/chart_summary.txt");
  REQUIRE(run("monitor " + (tmp / "x") + "/est.csv --out " + (tmp / "x") +
              "/chart") == 0);
  CHECK(slurp((tmp / "x") + "/chart_summary.txt") == snapshot);
}
