#pragma once

#include <string>
#include <vector>

#include "date.hpp"

namespace efl {

// Travel direction of the escalator. Passenger load adds to the fixed loss on
// an upward unit and subtracts from it on a downward unit (gravity assists).
enum class Direction { Up, Down };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);

struct EnergySample {
  int minute = 0;        // minute of the working day, [0, 1439]
  double energy_wh = 0.0;
};

// Maximal stretch of consecutive operating minutes. Bounds are inclusive.
struct OperatingRun {
  int start_minute = 0;
  int end_minute = 0;

  int length() const { return end_minute - start_minute + 1; }
};

// One working day of minute-indexed energy readings for one escalator. A
// working day runs from the day boundary (04:00 by default) to the next
// boundary; `day` is the calendar date of the boundary that starts it.
// Samples are sorted by minute; missing minutes are simply absent. The
// operating mask is parallel to `samples` and marks minutes the escalator was
// actually running. Profiles are immutable after construction and safe to
// share across threads.
struct DailyProfile {
  std::string escalator_id;
  Day day{};
  Direction direction = Direction::Up;
  std::vector<EnergySample> samples;
  std::vector<bool> operating;
  int n_operating = 0;

  // Energies of operating minutes, in minute order.
  std::vector<double> operating_energies() const;
};

constexpr double kDefaultOffThresholdWh = 1.0;
constexpr int kMinutesPerDay = 1440;

// Checks the structural invariants (sorted unique minutes in range, mask
// parallel to samples, consistent n_operating, n_operating < 1440,
// non-negative finite energies). Throws Error(Validation).
void validate_profile(const DailyProfile& profile);

// Rebuilds the operating mask by thresholding: a minute is operating when its
// energy is >= off_threshold_wh. Returns a new profile.
DailyProfile detect_operating_mask(const DailyProfile& profile,
                                   double off_threshold_wh = kDefaultOffThresholdWh);

// Maximal contiguous operating runs in minute order. A gap in the recorded
// minutes breaks a run: an absent minute is not known to be operating.
std::vector<OperatingRun> operating_runs(const DailyProfile& profile);

} // namespace efl
