#pragma once

// End-to-end conversion of chart directories into annotation TSVs, corrected
// beat files and a manifest.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <functional>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "adtof/alignment.hpp"
#include "adtof/annotations.hpp"
#include "adtof/audio.hpp"
#include "adtof/beat_tracker.hpp"
#include "adtof/chart.hpp"
#include "adtof/error.hpp"
#include "adtof/manifest.hpp"
#include "adtof/pitch_map.hpp"
#include "adtof/text.hpp"
#include "adtof/timing.hpp"
#include "adtof/vocabulary.hpp"

namespace adtof {

struct ConvertConfig {
  PitchMapConfig pitch_map = default_pitch_map();
  bool align = true;
  std::optional<std::filesystem::path> beats_dir;
  double match_window = 0.050;
  SanityLimits limits;
  double chord_window = 0.010;
  // Used when no precomputed beats file exists but the chart has audio.
  std::shared_ptr<const BeatEstimator> estimator = std::make_shared<SpectralFluxBeatTracker>();
  unsigned jobs = 1;
  // Seconds appended after the last event when no audio gives the length.
  double tail_seconds = 2.0;
};

struct ConvertResult {
  TrackRecord record;
  std::vector<LabeledOnset> onsets;
  std::vector<double> beats;
};

namespace detail {

inline std::vector<double> annotated_beats(const Chart& chart) {
  const auto& map = chart.tempo_map;
  if (!chart.beat_ticks.empty()) {
    std::vector<double> out;
    for (auto t : chart.beat_ticks) out.push_back(map.tick_to_seconds(t));
    return out;
  }
  return map.beat_grid(chart.last_event_tick());
}

}  // namespace detail

/// Converts one chart directory. Never throws for per-track problems: they
/// end up as a discarded TrackRecord.
inline ConvertResult convert_track(const std::filesystem::path& chart_dir, const ConvertConfig& cfg) {
  ConvertResult result;
  TrackRecord& rec = result.record;
  rec.id = chart_dir.filename().string();

  Chart chart;
  try {
    chart = load_chart(chart_dir, cfg.pitch_map);
  } catch (const Error& e) {
    rec.discard(e.code() == ErrorCode::EmptyGameplay ? DiscardReason::Empty : DiscardReason::ParseError, e.what());
    return result;
  } catch (const std::exception& e) {
    rec.discard(DiscardReason::ParseError, e.what());
    return result;
  }
  rec.artist = chart.metadata.artist;
  rec.title = chart.metadata.title;
  rec.genre = chart.metadata.genre;
  rec.unmapped_notes = chart.unmapped_notes;

  std::optional<AudioBuffer> audio;
  if (chart.audio_path) {
    try {
      audio = read_wav(*chart.audio_path);
    } catch (const Error& e) {
      rec.discard(DiscardReason::ParseError, e.what());
      return result;
    }
  }

  const auto& map = chart.tempo_map;
  std::vector<TimedEvent<GameplayLabel>> gameplay;
  std::vector<TimedEvent<AnimationLabel>> animation;
  for (const auto& e : chart.gameplay) gameplay.push_back({map.tick_to_seconds(e.tick), e.label});
  for (const auto& e : chart.animation) animation.push_back({map.tick_to_seconds(e.tick), e.label});

  ResolvedTrack resolved = resolve_track(gameplay, animation, cfg.chord_window);
  rec.discrepancies = std::move(resolved.discrepancies);
  std::vector<LabeledOnset> onsets = std::move(resolved.onsets);
  std::vector<double> beats = detail::annotated_beats(chart);

  if (cfg.align) {
    std::optional<BeatSeq> estimated;
    try {
      std::filesystem::path beats_file;
      if (cfg.beats_dir) beats_file = *cfg.beats_dir / (rec.id + ".txt");
      if (!beats_file.empty() && std::filesystem::exists(beats_file)) {
        estimated = PrecomputedBeats(beats_file).estimate(audio.value_or(AudioBuffer{}));
      } else if (audio && cfg.estimator) {
        estimated = cfg.estimator->estimate(*audio);
      }
    } catch (const Error& e) {
      rec.discard(e.code() == ErrorCode::BadBeatsFile ? DiscardReason::ParseError : DiscardReason::AlignmentSanity, e.what());
      return result;
    }
    if (!estimated) {
      rec.discard(DiscardReason::AlignmentSanity, "no beat estimates available (no beats file and no audio)");
      return result;
    }

    DeviationProfile profile = match_beats(beats, estimated->times, cfg.match_window);
    rec.alignment = sanity_check(profile, cfg.limits);
    if (rec.alignment->verdict == Verdict::Discard) {
      rec.discard(DiscardReason::AlignmentSanity, rec.alignment->reason);
      return result;
    }
    onsets = correct_onsets(std::move(onsets), profile);
    beats = correct_beats(profile);
    for (auto& o : onsets) o.time = std::max(0.0, o.time);
    for (auto& b : beats) b = std::max(0.0, b);
    std::stable_sort(onsets.begin(), onsets.end(), detail::onset_less);
  }

  rec.n_onsets_per_class = class_histogram(onsets);
  if (onsets.empty()) {
    rec.discard(DiscardReason::Empty, "no onsets after label resolution");
    return result;
  }
  if (audio) {
    rec.duration = audio->duration();
  } else {
    rec.duration = onsets.back().time + cfg.tail_seconds;
  }
  result.onsets = std::move(onsets);
  result.beats = std::move(beats);
  return result;
}

inline std::filesystem::path annotation_path(const std::filesystem::path& out, const std::string& id) {
  return out / "annotations" / (id + ".tsv");
}

inline std::filesystem::path beats_path(const std::filesystem::path& out, const std::string& id) {
  return out / "beats" / (id + ".txt");
}

/// Writes (or, for discarded tracks, removes) the per-track outputs.
inline void write_track_outputs(const std::filesystem::path& out, const ConvertResult& r) {
  namespace fs = std::filesystem;
  auto ann = annotation_path(out, r.record.id);
  auto bts = beats_path(out, r.record.id);
  if (r.record.kept()) {
    text::write_file_atomic(ann, format_annotations(r.onsets));
    text::write_file_atomic(bts, format_beats_file(r.beats));
  } else {
    std::error_code ec;
    fs::remove(ann, ec);
    fs::remove(bts, ec);
  }
}

/// Every immediate subdirectory of `input` is a chart, processed in name order.
inline std::vector<std::filesystem::path> discover_charts(const std::filesystem::path& input) {
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(input)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

/// Converts every chart under `input` into `output` using a bounded pool of
/// `cfg.jobs` workers. The manifest is assembled in track-id order so the
/// result does not depend on scheduling.
inline Manifest run_convert(const std::filesystem::path& input, const std::filesystem::path& output, const ConvertConfig& cfg,
                            const std::function<void(const TrackRecord&)>& on_track = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(input)) throw Error(ErrorCode::Io, "input is not a directory: " + input.string());
  fs::create_directories(output / "annotations");
  fs::create_directories(output / "beats");

  auto charts = discover_charts(input);
  std::vector<TrackRecord> records(charts.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (std::size_t i = next++; i < charts.size(); i = next++) {
      try {
        ConvertResult r = convert_track(charts[i], cfg);
        write_track_outputs(output, r);
        records[i] = std::move(r.record);
        if (on_track) {
          std::lock_guard lock(report_mutex);
          on_track(records[i]);
        }
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned jobs = std::max(1u, cfg.jobs);
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  Manifest m;
  m.tracks = std::move(records);
  std::sort(m.tracks.begin(), m.tracks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  save_manifest(output / "manifest.json", m);
  return m;
}

}  // namespace adtof
