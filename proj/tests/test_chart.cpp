#include <gtest/gtest.h>

#include "adtof/chart.hpp"
#include "adtof/midi.hpp"
#include "test_support.hpp"

using namespace adtof;
using namespace adtof::testing;

namespace {

// Deliberately unlike the shipped defaults.
PitchMapConfig fixture_map() {
  PitchMapConfig m;
  m.gameplay = {{60, GameplayLabel::OrangeDrum}, {61, GameplayLabel::RedDrum},     {62, GameplayLabel::YellowCymbal},
                {63, GameplayLabel::BlueCymbal}, {64, GameplayLabel::GreenCymbal}, {65, GameplayLabel::GreenDrum}};
  m.tom_markers = {{70, PadColor::Yellow}, {71, PadColor::Blue}, {72, PadColor::Green}};
  m.animation = {{10, AnimationLabel::SnareDrum}, {11, AnimationLabel::FloorTom}};
  m.drum_track = "KIT";
  m.beat_track = "GRID";
  return m;
}

ChartMetadata meta() { return {"T", "A", "G", {}}; }

Chart assemble(const std::vector<TrackBytes>& tracks, const PitchMapConfig& map = fixture_map()) {
  auto smf = midi::parse_smf(smf_bytes(1, 480, tracks));
  return assemble_chart(smf.tracks, smf.ticks_per_quarter, meta(), map);
}

}  // namespace

TEST(Chart, YellowPadWithoutMarkerIsCymbal) {
  TrackBytes t;
  t.name("KIT").hit(0, 62);
  auto c = assemble({t});
  ASSERT_EQ(c.gameplay.size(), 1u);
  EXPECT_EQ(c.gameplay[0].label, GameplayLabel::YellowCymbal);
}

TEST(Chart, YellowPadInsideHeldMarkerIsDrum) {
  TrackBytes t;
  t.name("KIT").on(0, 70).hit(100, 62).off(480, 70).hit(480, 62).hit(600, 62);
  auto c = assemble({t});
  ASSERT_EQ(c.gameplay.size(), 3u);
  EXPECT_EQ(c.gameplay[0].tick, 100u);
  EXPECT_EQ(c.gameplay[0].label, GameplayLabel::YellowDrum);
  // The marker's note-off tick is outside the held interval.
  EXPECT_EQ(c.gameplay[1].label, GameplayLabel::YellowCymbal);
  EXPECT_EQ(c.gameplay[2].label, GameplayLabel::YellowCymbal);
}

TEST(Chart, MarkerAffectsOnlyItsPad) {
  TrackBytes t;
  t.name("KIT").on(0, 71).hit(10, 62).hit(10, 63).hit(10, 64).off(20, 71);
  auto c = assemble({t});
  ASSERT_EQ(c.gameplay.size(), 3u);
  EXPECT_EQ(c.gameplay[0].label, GameplayLabel::YellowCymbal);
  EXPECT_EQ(c.gameplay[1].label, GameplayLabel::BlueDrum);
  EXPECT_EQ(c.gameplay[2].label, GameplayLabel::GreenCymbal);
}

TEST(Chart, UnclosedMarkerRunsToEnd) {
  TrackBytes t;
  t.name("KIT").on(0, 72).hit(5000, 64);
  auto c = assemble({t});
  EXPECT_EQ(c.gameplay.at(0).label, GameplayLabel::GreenDrum);
}

TEST(Chart, NoDrumTrack) {
  TrackBytes tempo;
  tempo.tempo(0, 500000);
  TrackBytes other;
  other.name("PART GUITAR").hit(0, 60);
  try {
    assemble({tempo, other});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoDrumTrack);
  }
}

TEST(Chart, EmptyGameplay) {
  TrackBytes t;
  t.name("KIT").hit(0, 10).hit(0, 99);
  try {
    assemble({t});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGameplay);
  }
}

TEST(Chart, TempoFromAnyTrackAndBeatTrack) {
  TrackBytes grid;
  grid.name("GRID").hit(0, 12).hit(480, 12).hit(960, 13);
  TrackBytes kit;
  kit.name("KIT").tempo(0, 600000).hit(480, 60);
  auto c = assemble({grid, kit});
  EXPECT_DOUBLE_EQ(c.tempo_map.tick_to_seconds(480), 0.6);
  EXPECT_EQ(c.beat_ticks, (std::vector<std::uint64_t>{0, 480, 960}));
}

TEST(Chart, AnimationAndUnmappedCounting) {
  TrackBytes t;
  t.name("KIT").hit(0, 60).hit(0, 10).hit(0, 11).hit(10, 99).hit(20, 98);
  auto c = assemble({t});
  EXPECT_EQ(c.gameplay.size(), 1u);
  ASSERT_EQ(c.animation.size(), 2u);
  EXPECT_EQ(c.animation[0].label, AnimationLabel::SnareDrum);
  EXPECT_EQ(c.animation[1].label, AnimationLabel::FloorTom);
  EXPECT_EQ(c.unmapped_notes, 2u);
}

TEST(Chart, ChordsPreservedAndSorted) {
  TrackBytes t;
  t.name("KIT").on(0, 61).on(0, 60).on(0, 62).off(1, 61).off(1, 60).off(1, 62).hit(5, 60);
  auto c = assemble({t});
  ASSERT_EQ(c.gameplay.size(), 4u);
  for (std::size_t i = 1; i < c.gameplay.size(); ++i) EXPECT_LE(c.gameplay[i - 1].tick, c.gameplay[i].tick);
  EXPECT_EQ(c.gameplay[0].tick, 0u);
  EXPECT_EQ(c.gameplay[2].tick, 0u);
}

TEST(Chart, GameplayCountMatchesMappedNoteOnsAndIsPure) {
  std::mt19937_64 rng(3);
  const auto map = fixture_map();
  for (int trial = 0; trial < 200; ++trial) {
    TrackBytes t;
    t.name("KIT");
    std::size_t expected = 0;
    std::uint64_t tick = 0;
    std::uniform_int_distribution<int> pitch(58, 74), step(0, 30);
    int n = std::uniform_int_distribution<int>(1, 60)(rng);
    bool marker_open[3] = {false, false, false};
    for (int k = 0; k < n; ++k) {
      tick += static_cast<std::uint64_t>(step(rng));
      auto p = static_cast<std::uint8_t>(pitch(rng));
      if (map.tom_markers.count(p)) {
        auto& open = marker_open[p - 70];
        open ? t.off(tick, p) : t.on(tick, p);
        open = !open;
        continue;
      }
      expected += map.gameplay.count(p);
      t.hit(tick, p);
    }
    t.hit(tick + 1, 60);
    ++expected;
    auto smf = midi::parse_smf(smf_bytes(1, 480, {t}));
    Chart a = assemble_chart(smf.tracks, 480, meta(), map);
    Chart b = assemble_chart(smf.tracks, 480, meta(), map);
    ASSERT_EQ(a.gameplay.size(), expected);
    EXPECT_EQ(a.gameplay, b.gameplay);
    EXPECT_EQ(a.animation, b.animation);
    EXPECT_EQ(a.unmapped_notes, b.unmapped_notes);
  }
}

TEST(Chart, LoadFromDirectory) {
  auto dir = temp_dir("chart_load");
  write_chart_dir(dir / "song", eight_bar_chart(), "Band");
  auto c = load_chart(dir / "song", default_pitch_map());
  EXPECT_EQ(c.metadata.artist, "Band");
  EXPECT_EQ(c.gameplay.size(), 11u);
  EXPECT_FALSE(c.audio_path.has_value());
  EXPECT_THROW(load_chart(dir / "missing", default_pitch_map()), std::exception);
}
