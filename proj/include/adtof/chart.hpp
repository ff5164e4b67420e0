#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/labels.hpp"
#include "adtof/metadata.hpp"
#include "adtof/midi.hpp"
#include "adtof/pitch_map.hpp"
#include "adtof/text.hpp"
#include "adtof/timing.hpp"

namespace adtof {

template <typename Label>
struct TickEvent {
  std::uint64_t tick = 0;
  Label label{};

  friend bool operator==(const TickEvent&, const TickEvent&) = default;
};

struct Chart {
  ChartMetadata metadata;
  TempoMap tempo_map;
  std::vector<TickEvent<GameplayLabel>> gameplay;
  std::vector<TickEvent<AnimationLabel>> animation;
  std::vector<std::uint64_t> beat_ticks;
  std::optional<std::filesystem::path> audio_path;
  // Note-ons on the drum track that matched no gameplay, marker or
  // animation pitch.
  std::size_t unmapped_notes = 0;

  std::uint64_t last_event_tick() const {
    std::uint64_t last = 0;
    if (!gameplay.empty()) last = std::max(last, gameplay.back().tick);
    if (!animation.empty()) last = std::max(last, animation.back().tick);
    return last;
  }
};

namespace detail {

inline const midi::Track* find_named_track(std::span<const midi::Track> tracks, std::string_view name) {
  for (const auto& track : tracks) {
    for (const auto& ev : track) {
      if (ev.kind == midi::EventKind::TrackName) {
        if (text::trim(ev.text) == name) return &track;
        break;  // only the first name event identifies a track
      }
    }
  }
  return nullptr;
}

struct HeldInterval {
  std::uint64_t on = 0;
  std::uint64_t off = UINT64_MAX;
};

}  // namespace detail

/// Builds a Chart from parsed tracks. Cymbal-pitch hits on a pad are
/// reinterpreted as that pad's drum while a tom marker for the pad is held
/// (note-on inclusive, note-off exclusive).
inline Chart assemble_chart(std::span<const midi::Track> tracks, std::uint32_t ticks_per_quarter, ChartMetadata metadata,
                            const PitchMapConfig& pitch_map) {
  std::vector<TempoChange> tempo;
  for (const auto& track : tracks) {
    for (const auto& ev : track) {
      if (ev.kind == midi::EventKind::TempoChange) tempo.push_back({ev.tick, ev.tempo_us_per_quarter});
    }
  }

  const midi::Track* drums = detail::find_named_track(tracks, pitch_map.drum_track);
  if (!drums) throw Error(ErrorCode::NoDrumTrack, "no track named \"" + pitch_map.drum_track + "\"");

  Chart chart;
  chart.metadata = std::move(metadata);
  chart.tempo_map = TempoMap(ticks_per_quarter, std::move(tempo));

  std::array<std::vector<detail::HeldInterval>, 3> markers;
  std::array<std::optional<std::uint64_t>, 3> open;
  for (const auto& ev : *drums) {
    if (ev.kind != midi::EventKind::NoteOn && ev.kind != midi::EventKind::NoteOff) continue;
    auto it = pitch_map.tom_markers.find(ev.pitch);
    if (it == pitch_map.tom_markers.end()) continue;
    auto pad = static_cast<std::size_t>(it->second);
    if (ev.kind == midi::EventKind::NoteOn) {
      if (!open[pad]) open[pad] = ev.tick;
    } else if (open[pad]) {
      markers[pad].push_back({*open[pad], ev.tick});
      open[pad].reset();
    }
  }
  for (std::size_t pad = 0; pad < 3; ++pad) {
    if (open[pad]) markers[pad].push_back({*open[pad], UINT64_MAX});
  }
  auto marker_held = [&](PadColor pad, std::uint64_t tick) {
    const auto& held = markers[static_cast<std::size_t>(pad)];
    return std::any_of(held.begin(), held.end(), [&](const auto& m) { return m.on <= tick && tick < m.off; });
  };

  for (const auto& ev : *drums) {
    if (ev.kind != midi::EventKind::NoteOn) continue;
    if (auto g = pitch_map.gameplay.find(ev.pitch); g != pitch_map.gameplay.end()) {
      GameplayLabel label = g->second;
      if (auto pad = cymbal_pad(label); pad && marker_held(*pad, ev.tick)) label = pad_drum(*pad);
      chart.gameplay.push_back({ev.tick, label});
    } else if (auto a = pitch_map.animation.find(ev.pitch); a != pitch_map.animation.end()) {
      chart.animation.push_back({ev.tick, a->second});
    } else if (!pitch_map.tom_markers.contains(ev.pitch)) {
      ++chart.unmapped_notes;
    }
  }
  if (chart.gameplay.empty()) throw Error(ErrorCode::EmptyGameplay, "drum track has no mapped gameplay notes");

  auto by_tick = [](const auto& a, const auto& b) { return a.tick < b.tick; };
  std::stable_sort(chart.gameplay.begin(), chart.gameplay.end(), by_tick);
  std::stable_sort(chart.animation.begin(), chart.animation.end(), by_tick);

  if (const midi::Track* beat = detail::find_named_track(tracks, pitch_map.beat_track)) {
    for (const auto& ev : *beat) {
      if (ev.kind == midi::EventKind::NoteOn) chart.beat_ticks.push_back(ev.tick);
    }
    std::sort(chart.beat_ticks.begin(), chart.beat_ticks.end());
    chart.beat_ticks.erase(std::unique(chart.beat_ticks.begin(), chart.beat_ticks.end()), chart.beat_ticks.end());
  }
  return chart;
}

struct ChartFiles {
  std::filesystem::path midi;
  std::filesystem::path metadata;
  std::optional<std::filesystem::path> audio;
};

/// Locates the chart, metadata and (PCM WAV) audio inside an extracted chart
/// directory. `notes.mid`, `song.ini` and `song.wav` are preferred; otherwise
/// the first match by name is used.
inline ChartFiles find_chart_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) entries.push_back(e.path());
  }
  std::sort(entries.begin(), entries.end());

  auto pick = [&](std::string_view preferred, std::string_view ext) -> std::optional<fs::path> {
    std::optional<fs::path> fallback;
    for (const auto& p : entries) {
      std::string name = text::lower(p.filename().string());
      if (name == preferred) return p;
      if (!fallback && text::lower(p.extension().string()) == ext) fallback = p;
    }
    return fallback;
  };

  ChartFiles files;
  auto mid = pick("notes.mid", ".mid");
  if (!mid) throw Error(ErrorCode::Io, "no MIDI chart in " + dir.string());
  auto ini = pick("song.ini", ".ini");
  if (!ini) throw Error(ErrorCode::Io, "no song.ini in " + dir.string());
  files.midi = *mid;
  files.metadata = *ini;
  files.audio = pick("song.wav", ".wav");
  return files;
}

inline Chart load_chart(const std::filesystem::path& dir, const PitchMapConfig& pitch_map) {
  ChartFiles files = find_chart_files(dir);
  auto bytes = text::read_binary(files.midi);
  midi::SmfFile smf = midi::parse_smf(bytes);
  ChartMetadata meta = parse_metadata(text::read_file(files.metadata));
  Chart chart = assemble_chart(smf.tracks, smf.ticks_per_quarter, std::move(meta), pitch_map);
  chart.audio_path = files.audio;
  return chart;
}

}  // namespace adtof
