#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "adtof/error.hpp"

namespace adtof {

/// Slack for closed-interval time comparisons, so a gap that is exactly the
/// window in decimal (e.g. 1.05 - 1.00 vs 0.05) still counts as inside.
inline constexpr double kTimeEpsilon = 1e-10;

inline bool within_window(double a, double b, double window) {
  double d = a > b ? a - b : b - a;
  return d <= window + kTimeEpsilon;
}

struct TempoChange {
  std::uint64_t tick = 0;
  std::uint32_t us_per_quarter = 500000;

  friend bool operator==(const TempoChange&, const TempoChange&) = default;
};

/// Tick/seconds conversion under a piecewise-constant tempo. Immutable once
/// built; the cumulative time at each change is precomputed.
class TempoMap {
public:
  static constexpr std::uint32_t kDefaultUsPerQuarter = 500000;  // 120 BPM

  TempoMap() : TempoMap(480, {}) {}

  /// Changes may arrive unsorted and with duplicates; for equal ticks the
  /// last one in input order wins. A 120 BPM entry is inserted at tick 0
  /// when the first change is later.
  TempoMap(std::uint32_t ticks_per_quarter, std::vector<TempoChange> changes) : tpq_(ticks_per_quarter) {
    if (tpq_ == 0) throw Error(ErrorCode::InvalidArgument, "ticks per quarter must be positive");
    std::stable_sort(changes.begin(), changes.end(),
                     [](const TempoChange& a, const TempoChange& b) { return a.tick < b.tick; });
    for (const auto& c : changes) {
      if (c.us_per_quarter == 0) throw Error(ErrorCode::InvalidArgument, "tempo must be positive");
      if (!changes_.empty() && changes_.back().tick == c.tick) {
        changes_.back() = c;
      } else {
        changes_.push_back(c);
      }
    }
    if (changes_.empty() || changes_.front().tick != 0) {
      changes_.insert(changes_.begin(), TempoChange{0, kDefaultUsPerQuarter});
    }
    seconds_at_change_.resize(changes_.size());
    seconds_at_change_[0] = 0.0;
    for (std::size_t i = 1; i < changes_.size(); ++i) {
      seconds_at_change_[i] = seconds_at_change_[i - 1] + span_seconds(changes_[i - 1], changes_[i].tick - changes_[i - 1].tick);
    }
  }

  std::uint32_t ticks_per_quarter() const { return tpq_; }
  std::span<const TempoChange> changes() const { return changes_; }

  double tick_to_seconds(std::uint64_t tick) const {
    auto it = std::upper_bound(changes_.begin(), changes_.end(), tick,
                               [](std::uint64_t t, const TempoChange& c) { return t < c.tick; });
    std::size_t idx = static_cast<std::size_t>(it - changes_.begin()) - 1;
    return seconds_at_change_[idx] + span_seconds(changes_[idx], tick - changes_[idx].tick);
  }

  /// One beat per quarter note from tick 0 up to and including end_tick.
  std::vector<double> beat_grid(std::uint64_t end_tick) const {
    std::vector<double> beats;
    beats.reserve(static_cast<std::size_t>(end_tick / tpq_) + 1);
    for (std::uint64_t t = 0; t <= end_tick; t += tpq_) beats.push_back(tick_to_seconds(t));
    return beats;
  }

private:
  double span_seconds(const TempoChange& c, std::uint64_t ticks) const {
    return static_cast<double>(ticks) * static_cast<double>(c.us_per_quarter) / (static_cast<double>(tpq_) * 1e6);
  }

  std::uint32_t tpq_;
  std::vector<TempoChange> changes_;
  std::vector<double> seconds_at_change_;
};

inline double tick_to_seconds(const TempoMap& map, std::uint64_t tick) { return map.tick_to_seconds(tick); }

inline std::vector<double> beat_grid(const TempoMap& map, std::uint64_t end_tick) { return map.beat_grid(end_tick); }

}  // namespace adtof
