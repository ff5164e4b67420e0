#pragma once

// Beat estimation behind a small interface: precomputed beat files for exact
// reproduction, and a self-contained spectral-flux + dynamic-programming
// tracker as a baseline.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "adtof/alignment.hpp"
#include "adtof/audio.hpp"
#include "adtof/error.hpp"
#include "adtof/features.hpp"
#include "adtof/text.hpp"

namespace adtof {

/// One decimal seconds value per line, strictly increasing. Blank lines are
/// ignored.
inline BeatSeq parse_beats_file(std::string_view content) {
  BeatSeq beats;
  int line_no = 0;
  for (auto line : text::split_lines(content)) {
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    auto v = text::parse_double(line);
    if (!v || !std::isfinite(*v) || *v < 0.0) {
      throw Error(ErrorCode::BadBeatsFile, "line " + std::to_string(line_no) + ": not a non-negative number");
    }
    if (!beats.times.empty() && !(*v > beats.times.back())) {
      throw Error(ErrorCode::BadBeatsFile, "line " + std::to_string(line_no) + ": beats not strictly increasing");
    }
    beats.times.push_back(*v);
  }
  if (beats.times.empty()) throw Error(ErrorCode::NoBeatsFound, "beats file is empty");
  return beats;
}

inline std::string format_beats_file(std::span<const double> beats) {
  std::string out;
  for (double b : beats) {
    out += text::format_seconds(b);
    out += '\n';
  }
  return out;
}

class BeatEstimator {
public:
  virtual ~BeatEstimator() = default;
  virtual BeatSeq estimate(const AudioBuffer& audio) const = 0;
};

/// File-backed estimator: returns the beats stored in a file and ignores the
/// audio.
class PrecomputedBeats final : public BeatEstimator {
public:
  explicit PrecomputedBeats(std::filesystem::path path) : path_(std::move(path)) {}

  BeatSeq estimate(const AudioBuffer& /*audio*/) const override { return parse_beats_file(text::read_file(path_)); }

private:
  std::filesystem::path path_;
};

struct BeatTrackerConfig {
  std::size_t window = 1024;
  double frame_rate = 100.0;
  double min_bpm = 40.0;
  double max_bpm = 240.0;
  double prior_bpm = 120.0;
  double prior_octaves = 1.0;  // std-dev of the log2 tempo prior
  double tightness = 100.0;    // penalty on deviation from the period in the DP
};

/// Baseline tracker: half-wave rectified spectral flux on a log-filtered
/// spectrogram, a global tempo from the prior-weighted autocorrelation, and a
/// dynamic program that trades onset strength against period consistency.
class SpectralFluxBeatTracker final : public BeatEstimator {
public:
  explicit SpectralFluxBeatTracker(BeatTrackerConfig cfg = {}) : cfg_(cfg) {}

  std::vector<double> onset_envelope(const AudioBuffer& audio) const {
    features::FeatureConfig fc;
    fc.stft.window = cfg_.window;
    fc.stft.hop = hop(audio);
    fc.f_min = 30.0;
    fc.f_max = 17000.0;
    auto spec = features::compute_features(audio, fc);
    std::vector<double> env(spec.n_frames, 0.0);
    for (std::size_t i = 1; i < spec.n_frames; ++i) {
      double flux = 0.0;
      for (std::size_t b = 0; b < spec.n_bands; ++b) flux += std::max(0.0f, spec.at(i, b) - spec.at(i - 1, b));
      env[i] = flux;
    }
    return env;
  }

  /// Beat period in frames.
  double estimate_period(std::span<const double> env) const {
    const double fps = cfg_.frame_rate;
    auto min_lag = static_cast<std::size_t>(std::floor(60.0 * fps / cfg_.max_bpm));
    auto max_lag = static_cast<std::size_t>(std::ceil(60.0 * fps / cfg_.min_bpm));
    min_lag = std::max<std::size_t>(min_lag, 1);
    max_lag = std::min(max_lag, env.size() > 1 ? env.size() - 1 : 1);
    double best = -1.0;
    std::size_t best_lag = static_cast<std::size_t>(std::lround(60.0 * fps / cfg_.prior_bpm));
    std::vector<double> score(max_lag + 2, 0.0);
    for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
      double acc = 0.0;
      for (std::size_t i = lag; i < env.size(); ++i) acc += env[i] * env[i - lag];
      acc /= static_cast<double>(env.size() - lag);
      double bpm = 60.0 * fps / static_cast<double>(lag);
      double z = std::log2(bpm / cfg_.prior_bpm) / cfg_.prior_octaves;
      score[lag] = acc * std::exp(-0.5 * z * z);
      if (score[lag] > best) {
        best = score[lag];
        best_lag = lag;
      }
    }
    double period = static_cast<double>(best_lag);
    if (best_lag > min_lag && best_lag < max_lag) {
      double a = score[best_lag - 1], b = score[best_lag], c = score[best_lag + 1];
      double denom = a - 2.0 * b + c;
      if (denom < 0.0) period += 0.5 * (a - c) / denom;
    }
    return period;
  }

  BeatSeq estimate(const AudioBuffer& audio) const override {
    auto env = onset_envelope(audio);
    double peak = env.empty() ? 0.0 : *std::max_element(env.begin(), env.end());
    if (!(peak > 0.0)) throw Error(ErrorCode::NoBeatsFound, "no onsets in audio");

    // Scale to unit standard deviation.
    const std::size_t n = env.size();
    double mean = std::accumulate(env.begin(), env.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : env) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(n));
    if (sd > 0.0) {
      for (auto& v : env) v /= sd;
    }

    const double period = estimate_period(env);
    std::vector<double> score(n, 0.0);
    std::vector<std::ptrdiff_t> back(n, -1);
    const auto lo = static_cast<std::ptrdiff_t>(std::floor(period / 2.0));
    const auto hi = static_cast<std::ptrdiff_t>(std::ceil(period * 2.0));
    for (std::size_t t = 0; t < n; ++t) {
      double best = 0.0;
      std::ptrdiff_t arg = -1;
      auto ti = static_cast<std::ptrdiff_t>(t);
      for (std::ptrdiff_t d = std::max<std::ptrdiff_t>(lo, 1); d <= hi && d <= ti; ++d) {
        double penalty = std::log(static_cast<double>(d) / period);
        double candidate = score[t - static_cast<std::size_t>(d)] - cfg_.tightness * penalty * penalty;
        if (arg < 0 || candidate > best) {
          best = candidate;
          arg = ti - d;
        }
      }
      if (arg >= 0 && best > 0.0) {
        score[t] = env[t] + best;
        back[t] = arg;
      } else {
        score[t] = env[t];
      }
    }

    // Last beat: best score among the final period's frames.
    std::size_t tail_start = n > static_cast<std::size_t>(hi) ? n - static_cast<std::size_t>(std::ceil(period)) : 0;
    std::size_t last = tail_start;
    for (std::size_t t = tail_start; t < n; ++t) {
      if (score[t] > score[last]) last = t;
    }
    std::vector<std::size_t> frames;
    for (auto t = static_cast<std::ptrdiff_t>(last); t >= 0; t = back[static_cast<std::size_t>(t)]) {
      frames.push_back(static_cast<std::size_t>(t));
    }
    std::reverse(frames.begin(), frames.end());

    BeatSeq beats;
    const double duration = audio.duration();
    const double fps = static_cast<double>(audio.sample_rate) / static_cast<double>(hop(audio));
    for (std::size_t f : frames) {
      double t = static_cast<double>(f) / fps;
      if (t > duration) break;
      if (beats.times.empty() || t > beats.times.back()) beats.times.push_back(t);
    }
    if (beats.times.empty()) throw Error(ErrorCode::NoBeatsFound, "tracker produced no beats");
    return beats;
  }

private:
  std::size_t hop(const AudioBuffer& audio) const {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(audio.sample_rate / cfg_.frame_rate)));
  }

  BeatTrackerConfig cfg_;
};

}  // namespace adtof
