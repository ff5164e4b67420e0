#pragma once

// Onset-level evaluation: peak picking on activations, tolerance-window
// matching, per-class and pooled F-measure, and fold averaging.

#include <algorithm>
#include <cstdio>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adtof/annotations.hpp"
#include "adtof/error.hpp"
#include "adtof/labels.hpp"
#include "adtof/timing.hpp"

namespace adtof::eval {

struct Activation {
  double frame_rate = 100.0;
  std::array<std::vector<double>, kNumClasses> series;  // values in [0, 1]

  std::size_t n_frames() const { return series[0].size(); }
};

struct PeakPickConfig {
  double threshold = 0.2;
  std::size_t pre_max = 2;
  std::size_t post_max = 2;
  std::size_t avg_window = 5;
  std::size_t min_distance = 3;
};

/// Frame i is a peak when it is the maximum of [i-pre_max, i+post_max], is at
/// least `threshold` above the mean of [i-avg_window, i+avg_window] and lies
/// at least `min_distance` frames after the previous peak. Windows are
/// clipped at the signal edges.
inline std::vector<double> peak_pick(std::span<const double> a, double frame_rate, const PeakPickConfig& cfg = {}) {
  std::vector<double> onsets;
  const std::size_t n = a.size();
  bool have_last = false;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= cfg.pre_max ? i - cfg.pre_max : 0;
    std::size_t hi = std::min(n - 1, i + cfg.post_max);
    double mx = *std::max_element(a.begin() + static_cast<std::ptrdiff_t>(lo), a.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    if (a[i] < mx) continue;

    std::size_t alo = i >= cfg.avg_window ? i - cfg.avg_window : 0;
    std::size_t ahi = std::min(n - 1, i + cfg.avg_window);
    double sum = 0.0;
    for (std::size_t k = alo; k <= ahi; ++k) sum += a[k];
    double mean = sum / static_cast<double>(ahi - alo + 1);
    if (a[i] < mean + cfg.threshold) continue;

    if (have_last && i - last < cfg.min_distance) continue;
    onsets.push_back(static_cast<double>(i) / frame_rate);
    last = i;
    have_last = true;
  }
  return onsets;
}

inline OnsetsByClass peak_pick(const Activation& act, const PeakPickConfig& cfg = {}) {
  for (const auto& s : act.series) {
    if (s.size() != act.n_frames()) throw Error(ErrorCode::DimensionMismatch, "activation series lengths differ");
  }
  OnsetsByClass out;
  for (std::size_t c = 0; c < kNumClasses; ++c) out[c] = peak_pick(act.series[c], act.frame_rate, cfg);
  return out;
}

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const Counts&, const Counts&) = default;
};

/// Maximum-cardinality one-to-one matching of sorted onset lists where a
/// pair is allowed iff |r - e| <= window (closed). Each reference takes the
/// earliest unused estimate still reachable; for equal-width windows on the
/// line this greedy attains the maximum.
inline Counts match_onsets(std::span<const double> reference, std::span<const double> estimated, double window = 0.050) {
  Counts c;
  std::size_t j = 0;
  for (double r : reference) {
    while (j < estimated.size() && estimated[j] < r && !within_window(r, estimated[j], window)) ++j;
    if (j < estimated.size() && within_window(r, estimated[j], window)) {
      ++c.tp;
      ++j;
    }
  }
  c.fp = estimated.size() - c.tp;
  c.fn = reference.size() - c.tp;
  return c;
}

struct EvalCounts {
  std::array<Counts, kNumClasses> per_class{};

  Counts pooled() const {
    Counts sum;
    for (const auto& c : per_class) sum += c;
    return sum;
  }

  EvalCounts& operator+=(const EvalCounts& o) {
    for (std::size_t k = 0; k < kNumClasses; ++k) per_class[k] += o.per_class[k];
    return *this;
  }
};

inline EvalCounts match_track(const OnsetsByClass& reference, const OnsetsByClass& estimated, double window = 0.050) {
  EvalCounts counts;
  for (std::size_t k = 0; k < kNumClasses; ++k) counts.per_class[k] = match_onsets(reference[k], estimated[k], window);
  return counts;
}

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

struct EvalReport {
  std::array<Scores, kNumClasses> per_class{};
  Scores sum;
  // Pooled counts behind the report (summed over folds when aggregated).
  EvalCounts counts;
};

/// With tp = fp = fn = 0 (nothing to find, nothing found) the scores are
/// `empty_score`, 1 by default. Otherwise a zero denominator gives 0.
inline Scores scores(const Counts& c, double empty_score = 1.0) {
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {empty_score, empty_score, empty_score};
  Scores s;
  s.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  s.recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  double pr = s.precision + s.recall;
  s.f_measure = pr > 0.0 ? 2.0 * s.precision * s.recall / pr : 0.0;
  return s;
}

inline EvalReport f_measure(const EvalCounts& counts, double empty_score = 1.0) {
  EvalReport r;
  for (std::size_t k = 0; k < kNumClasses; ++k) r.per_class[k] = scores(counts.per_class[k], empty_score);
  r.sum = scores(counts.pooled(), empty_score);
  r.counts = counts;
  return r;
}

/// Scores are computed per fold from that fold's pooled counts, then
/// averaged arithmetically across folds.
inline EvalReport aggregate_folds(std::span<const EvalCounts> folds, double empty_score = 1.0) {
  if (folds.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one fold");
  EvalReport avg;
  const double n = static_cast<double>(folds.size());
  auto accumulate = [n](Scores& into, const Scores& s) {
    into.precision += s.precision / n;
    into.recall += s.recall / n;
    into.f_measure += s.f_measure / n;
  };
  if (folds.size() == 1) return f_measure(folds[0], empty_score);
  for (const auto& fold : folds) {
    EvalReport r = f_measure(fold, empty_score);
    for (std::size_t k = 0; k < kNumClasses; ++k) accumulate(avg.per_class[k], r.per_class[k]);
    accumulate(avg.sum, r.sum);
    avg.counts += fold;
  }
  return avg;
}

/// Rows = classes then SUM; columns = precision, recall, f_measure, tp, fp, fn.
inline std::string format_report(const EvalReport& r) {
  std::string out = "class\tprecision\trecall\tf_measure\ttp\tfp\tfn\n";
  auto row = [&out](std::string_view name, const Scores& s, const Counts& c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.*s\t%.6f\t%.6f\t%.6f\t%zu\t%zu\t%zu\n", static_cast<int>(name.size()), name.data(),
                  s.precision, s.recall, s.f_measure, c.tp, c.fp, c.fn);
    out += buf;
  };
  for (auto c : kAllClasses) row(class_name(c), r.per_class[class_index(c)], r.counts.per_class[class_index(c)]);
  row("SUM", r.sum, r.counts.pooled());
  return out;
}

}  // namespace adtof::eval
