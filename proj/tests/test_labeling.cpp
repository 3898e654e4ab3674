#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "labeling.hpp"
#include "test_helpers.hpp"

using namespace efl;
using efl::test::make_profile;

namespace {

// the eleven published per-experiment errors, by method
const std::vector<double> kClassicalErrors = {-0.44, -1.85, -5.97, -6.31,
                                              -5.21, -6.63, -6.67, -0.53,
                                              0.36,  1.02,  0.63};
const std::vector<double> kEngineeringErrors = {-1.24, -1.72, -2.62, -1.86,
                                                -2.64, -2.49, -2.86, -0.78,
                                                -2.12, -0.94, 0.56};
const std::vector<double> kOptimizationErrors = {-1.04, -1.52, 0.48, 0.94,
                                                 0.56,  0.86,  1.04, -0.48,
                                                 -1.62, -1.04, 0.56};

std::vector<ErrorRecord> records_from(const std::vector<double>& taus) {
  std::vector<ErrorRecord> records;
  for (size_t i = 0; i < taus.size(); ++i)
    records.push_back({"e" + std::to_string(i), parse_date("2021-01-01"),
                       Method::Classical, taus[i], 0.0});
  return records;
}

ExperimentLabel label_for(const DailyProfile& p, double value) {
  return {p.escalator_id, p.day, value, 0};
}

} // namespace

TEST_CASE("moving average: trailing window") {
  CHECK(moving_average({5.0, 5.0, 5.0, 5.0}, 2) ==
        std::vector<double>{5.0, 5.0, 5.0});
  CHECK(moving_average({1, 2, 3, 4, 5}, 5) == std::vector<double>{3.0});

  std::mt19937 rng(41);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::vector<double> series(60);
  for (auto& v : series)
    v = value(rng);
  const int w = 7;
  const auto ma = moving_average(series, w);
  REQUIRE(ma.size() == series.size() - size_t(w) + 1);
  for (size_t i = 0; i < ma.size(); ++i) {
    double sum = 0.0;
    for (int j = 0; j < w; ++j)
      sum += series[i + size_t(j)];
    CHECK(ma[i] == doctest::Approx(sum / w).epsilon(1e-12));
  }

  // commutes with adding a constant
  auto shifted = series;
  for (auto& v : shifted)
    v += 3.5;
  const auto ma_shifted = moving_average(shifted, w);
  for (size_t i = 0; i < ma.size(); ++i)
    CHECK(ma_shifted[i] == doctest::Approx(ma[i] + 3.5).epsilon(1e-12));

  CHECK_THROWS_AS(moving_average({1.0, 2.0}, 3), Error);
  CHECK_THROWS_AS(moving_average({1.0, 2.0}, 0), Error);
}

TEST_CASE("label extraction: constant series converges immediately") {
  const auto profile = make_profile(std::vector<double>(90, 50.0));
  const auto label = extract_label(profile);
  CHECK(label.f_experiment_wh == 50.0);
  CHECK(label.convergence_minute == 4); // first full moving-average window
  CHECK(label.escalator_id == profile.escalator_id);
}

TEST_CASE("label extraction: warm-up decay settles onto the fixed loss") {
  // F + A exp(-t/tau); by the time successive 5-minute means move less than
  // 0.1 Wh the residual averaged over the remaining run is below 0.1.
  std::vector<double> energies;
  for (int t = 0; t < 180; ++t)
    energies.push_back(40.0 + 8.0 * std::exp(-double(t) / 12.0));
  const auto label = extract_label(make_profile(energies));
  CHECK(std::abs(label.f_experiment_wh - 40.0) < 0.1);
  CHECK(label.convergence_minute > 0);
  CHECK(label.convergence_minute < 60);
}

TEST_CASE("label extraction: oscillation never converges") {
  std::vector<double> energies;
  for (int t = 0; t < 120; ++t)
    energies.push_back(50.0 + (t % 2 ? 1.0 : -1.0));
  CHECK_THROWS_AS(extract_label(make_profile(energies)), Error);
  try {
    extract_label(make_profile(energies));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("estimation errors: tau arithmetic from published rows") {
  const auto p1 = make_profile(std::vector<double>(90, 50.0), Direction::Up, 0,
                               "exp-12");
  const auto p2 = make_profile(std::vector<double>(90, 40.0), Direction::Up, 0,
                               "exp-3");
  FixedLossEstimate e1;
  e1.method = Method::Classical;
  e1.value_wh = 51.1;
  FixedLossEstimate e2 = e1;
  e2.value_wh = 40.76;

  const auto records = estimation_errors(
      {label_for(p1, 51.54), label_for(p2, 39.74)},
      {{"exp-12", p1.day, e1}, {"exp-3", p2.day, e2}});
  REQUIRE(records.size() == 2);
  CHECK(records[0].tau_wh == doctest::Approx(-0.44).epsilon(1e-9));
  CHECK(records[0].tau_pct == doctest::Approx(-0.8537).epsilon(1e-3));
  CHECK(records[1].tau_wh == doctest::Approx(1.02).epsilon(1e-9));
  CHECK(records[1].tau_pct == doctest::Approx(2.5667).epsilon(1e-3));

  // exact match means zero error
  FixedLossEstimate exact;
  exact.value_wh = 51.54;
  const auto zero =
      estimation_errors({label_for(p1, 51.54)}, {{"exp-12", p1.day, exact}});
  CHECK(zero[0].tau_wh == 0.0);
  CHECK(zero[0].tau_pct == 0.0);
}

TEST_CASE("estimation errors: orphans are reported") {
  const auto p = make_profile(std::vector<double>(90, 50.0), Direction::Up, 0,
                              "exp-1");
  FixedLossEstimate est;
  est.value_wh = 50.0;
  CHECK_THROWS_WITH_AS(
      estimation_errors({label_for(p, 50.0)},
                        {{"exp-OTHER", p.day, est}}),
      doctest::Contains("exp-OTHER"), Error);
}

TEST_CASE("error summary matches the published table statistics") {
  const auto classical = summarize_errors(records_from(kClassicalErrors));
  CHECK(classical.mean == doctest::Approx(-2.8727272727).epsilon(1e-9));
  CHECK(classical.stddev == doctest::Approx(3.2516552428).epsilon(1e-9));

  const auto engineering = summarize_errors(records_from(kEngineeringErrors));
  CHECK(engineering.mean == doctest::Approx(-1.7009090909).epsilon(1e-9));
  CHECK(engineering.stddev == doctest::Approx(1.0317601906).epsilon(1e-9));

  const auto optimization = summarize_errors(records_from(kOptimizationErrors));
  CHECK(optimization.mean == doctest::Approx(-0.1145454545).epsilon(1e-9));
  CHECK(optimization.stddev == doctest::Approx(1.0366519535).epsilon(1e-9));

  const auto simple = summarize_errors(records_from({-1.0, 1.0}));
  CHECK(simple.mean == 0.0);
  CHECK(simple.stddev == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(summarize_errors(records_from({1.0})), Error);
}

TEST_CASE("error summary: mean shifts, std does not") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> tau(-3.0, 3.0);
  std::vector<double> taus(20);
  for (auto& t : taus)
    t = tau(rng);
  const auto base = summarize_errors(records_from(taus));
  auto shifted = taus;
  for (auto& t : shifted)
    t += 2.5;
  const auto moved = summarize_errors(records_from(shifted));
  CHECK(moved.mean == doctest::Approx(base.mean + 2.5).epsilon(1e-12));
  CHECK(moved.stddev == doctest::Approx(base.stddev).epsilon(1e-9));
}

TEST_CASE("grid tuning: single grid point equals a direct run") {
  std::mt19937 rng(47);
  std::uniform_real_distribution<double> noise(-0.3, 0.3);
  std::vector<std::pair<DailyProfile, ExperimentLabel>> experiments;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> energies;
    for (int t = 0; t < 150; ++t)
      energies.push_back(45.0 + noise(rng));
    auto p = make_profile(energies, Direction::Up, 0, "exp-" + std::to_string(i));
    experiments.emplace_back(p, label_for(p, 45.0));
  }

  const auto curve = grid_tune(experiments, Method::Optimization, {0.3});
  REQUIRE(curve.param.size() == 1);

  std::vector<ErrorRecord> direct;
  for (const auto& [p, l] : experiments) {
    const double tau =
        optimization_fixed_loss(p, {0.3, 0.01}).value_wh - l.f_experiment_wh;
    direct.push_back({p.escalator_id, p.day, Method::Optimization, tau, 0.0});
  }
  const auto summary = summarize_errors(direct);
  CHECK(curve.mean_error[0] == doctest::Approx(summary.mean).epsilon(1e-12));
  CHECK(curve.std_error[0] == doctest::Approx(summary.stddev).epsilon(1e-12));
}

TEST_CASE("grid tuning: a single experiment leaves std undefined") {
  const auto p = make_profile(std::vector<double>(100, 50.0));
  const auto curve = grid_tune({{p, label_for(p, 50.0)}}, Method::Engineering,
                               {5.0, 10.0});
  REQUIRE(curve.param.size() == 2);
  CHECK(curve.mean_error[0] == doctest::Approx(0.0));
  CHECK(std::isnan(curve.std_error[0]));
  CHECK(std::isnan(curve.std_error[1]));
}

TEST_CASE("grid tuning: validation") {
  const auto p = make_profile(std::vector<double>(100, 50.0));
  CHECK_THROWS_AS(grid_tune({}, Method::Engineering, {5.0}), Error);
  CHECK_THROWS_AS(grid_tune({{p, label_for(p, 50.0)}}, Method::Engineering, {}),
                  Error);
  CHECK_THROWS_AS(grid_tune({{p, label_for(p, 50.0)}}, Method::Classical, {5.0}),
                  Error);
}

TEST_CASE("grid tuning: noisy vacant runs reproduce the tuning shapes") {
  // seeded vacant-run experiments: warm-up plus N(45, 0.3^2) noise
  std::mt19937 rng(53);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<std::pair<DailyProfile, ExperimentLabel>> experiments;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> energies;
    for (int t = 0; t < 200; ++t)
      energies.push_back(45.0 + 8.0 * std::exp(-double(t) / 12.0) + noise(rng));
    auto p = make_profile(energies, Direction::Up, 0, "exp-" + std::to_string(i));
    experiments.emplace_back(p, label_for(p, 45.0));
  }

  // optimization: error magnitude grows once delta passes 0.5
  const auto opt = grid_tune(experiments, Method::Optimization,
                             {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  CHECK(std::abs(opt.mean_error[9]) > std::abs(opt.mean_error[4]));
  CHECK(std::abs(opt.mean_error[9]) > std::abs(opt.mean_error[2]));

  // engineering: consistently below the truth by a small margin
  const auto eng = grid_tune(experiments, Method::Engineering,
                             {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  for (double mean : eng.mean_error) {
    CHECK(mean < 0.0);
    CHECK(mean > -1.5);
  }
}
