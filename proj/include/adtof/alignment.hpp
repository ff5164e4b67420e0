#pragma once

// Beat snapping and annotation correction: annotated beats are matched to
// estimated beats, the per-beat deviation is linearly interpolated, and every
// onset is shifted by the deviation at its time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/timing.hpp"

namespace adtof {

/// Strictly increasing, non-negative beat times in seconds.
struct BeatSeq {
  std::vector<double> times;

  static bool is_valid(std::span<const double> t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] >= 0.0) || !std::isfinite(t[i])) return false;
      if (i > 0 && !(t[i] > t[i - 1])) return false;
    }
    return true;
  }
};

struct DeviationAnchor {
  double annotated_time = 0.0;
  double deviation = 0.0;  // estimated - annotated; zero when unmatched
  bool matched = false;
};

struct DeviationProfile {
  std::vector<DeviationAnchor> anchors;

  std::size_t matched_count() const {
    return static_cast<std::size_t>(std::count_if(anchors.begin(), anchors.end(), [](const auto& a) { return a.matched; }));
  }

  double matched_fraction() const {
    return anchors.empty() ? 0.0 : static_cast<double>(matched_count()) / static_cast<double>(anchors.size());
  }

  double max_abs_deviation() const {
    double m = 0.0;
    for (const auto& a : anchors) {
      if (a.matched) m = std::max(m, std::abs(a.deviation));
    }
    return m;
  }
};

/// Monotone (non-crossing) matching maximizing the number of pairs within
/// `match_window`; among maximum matchings the one with the smallest total
/// absolute deviation is chosen.
inline DeviationProfile match_beats(std::span<const double> annotated, std::span<const double> estimated,
                                    double match_window = 0.05) {
  const std::size_t n = annotated.size();
  const std::size_t m = estimated.size();

  struct Score {
    std::size_t count = 0;
    double cost = 0.0;
  };
  auto better = [](const Score& a, const Score& b) { return a.count > b.count || (a.count == b.count && a.cost < b.cost); };

  enum : std::uint8_t { kSkipAnnotated, kSkipEstimated, kPair };
  std::vector<std::uint8_t> choice((n + 1) * (m + 1), kSkipAnnotated);
  std::vector<Score> prev(m + 1), cur(m + 1);
  for (std::size_t j = 1; j <= m; ++j) choice[j] = kSkipEstimated;

  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0];
    choice[i * (m + 1)] = kSkipAnnotated;
    for (std::size_t j = 1; j <= m; ++j) {
      Score best = prev[j];
      std::uint8_t pick = kSkipAnnotated;
      if (better(cur[j - 1], best)) {
        best = cur[j - 1];
        pick = kSkipEstimated;
      }
      double a = annotated[i - 1];
      double e = estimated[j - 1];
      if (within_window(a, e, match_window)) {
        Score paired{prev[j - 1].count + 1, prev[j - 1].cost + std::abs(e - a)};
        if (better(paired, best)) {
          best = paired;
          pick = kPair;
        }
      }
      cur[j] = best;
      choice[i * (m + 1) + j] = pick;
    }
    std::swap(prev, cur);
  }

  DeviationProfile profile;
  profile.anchors.resize(n);
  for (std::size_t i = 0; i < n; ++i) profile.anchors[i].annotated_time = annotated[i];
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    switch (choice[i * (m + 1) + j]) {
      case kPair:
        profile.anchors[i - 1].matched = true;
        profile.anchors[i - 1].deviation = estimated[j - 1] - annotated[i - 1];
        --i;
        --j;
        break;
      case kSkipAnnotated:
        --i;
        break;
      default:
        --j;
        break;
    }
  }
  return profile;
}

/// Piecewise-linear deviation through the matched anchors, held constant
/// outside the matched range. Build once and query many times.
class DeviationCurve {
public:
  explicit DeviationCurve(const DeviationProfile& profile) {
    for (const auto& a : profile.anchors) {
      if (a.matched) {
        times_.push_back(a.annotated_time);
        values_.push_back(a.deviation);
      }
    }
    if (times_.size() < 2) {
      throw Error(ErrorCode::InsufficientAnchors,
                  "need at least 2 matched beats, have " + std::to_string(times_.size()));
    }
  }

  double operator()(double t) const {
    if (t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;  // times_[k] <= t < times_[k+1]
    double t0 = times_[k], t1 = times_[k + 1];
    double d0 = values_[k], d1 = values_[k + 1];
    return d0 + (d1 - d0) * ((t - t0) / (t1 - t0));
  }

private:
  std::vector<double> times_;
  std::vector<double> values_;
};

inline double interpolate_deviation(const DeviationProfile& profile, double t) { return DeviationCurve(profile)(t); }

/// Shifts each event's `time` by the interpolated deviation and re-sorts
/// (stable) by time. Works for any event type with a `time` member.
template <typename Event>
std::vector<Event> correct_onsets(std::vector<Event> onsets, const DeviationProfile& profile) {
  DeviationCurve curve(profile);
  for (auto& ev : onsets) ev.time += curve(ev.time);
  std::stable_sort(onsets.begin(), onsets.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  return onsets;
}

/// Corrected beat times: every annotated beat moved by the curve.
inline std::vector<double> correct_beats(const DeviationProfile& profile) {
  DeviationCurve curve(profile);
  std::vector<double> out;
  out.reserve(profile.anchors.size());
  for (const auto& a : profile.anchors) out.push_back(a.annotated_time + curve(a.annotated_time));
  std::sort(out.begin(), out.end());
  return out;
}

enum class Verdict { Keep, Discard };

struct AlignmentReport {
  double matched_fraction = 0.0;
  double max_abs_deviation = 0.0;
  Verdict verdict = Verdict::Keep;
  std::string reason;
};

inline constexpr std::string_view kReasonInsufficientAnchors = "insufficient anchors";
inline constexpr std::string_view kReasonMajority = "majority check failed";
inline constexpr std::string_view kReasonMaxCorrection = "max correction exceeded";

struct SanityLimits {
  double min_matched_fraction = 0.5;
  double max_correction = 0.080;
};

/// A track is kept only if most annotated beats found an estimated beat and
/// no correction exceeds the bound. All failing rules are listed in `reason`.
inline AlignmentReport sanity_check(const DeviationProfile& profile, const SanityLimits& limits = {}) {
  AlignmentReport report;
  report.matched_fraction = profile.matched_fraction();
  report.max_abs_deviation = profile.max_abs_deviation();
  std::vector<std::string_view> failed;
  if (profile.matched_count() < 2) failed.push_back(kReasonInsufficientAnchors);
  if (report.matched_fraction < limits.min_matched_fraction) failed.push_back(kReasonMajority);
  if (report.max_abs_deviation > limits.max_correction) failed.push_back(kReasonMaxCorrection);
  for (std::size_t k = 0; k < failed.size(); ++k) {
    if (k) report.reason += "; ";
    report.reason += failed[k];
  }
  report.verdict = failed.empty() ? Verdict::Keep : Verdict::Discard;
  return report;
}

}  // namespace adtof
