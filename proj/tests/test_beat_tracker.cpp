#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adtof/beat_tracker.hpp"
#include "adtof/eval.hpp"

using namespace adtof;

namespace {

AudioBuffer click_track(double period, double seconds, double first = 0.0, std::uint32_t sr = 44100) {
  AudioBuffer a;
  a.sample_rate = sr;
  a.samples.assign(static_cast<std::size_t>(seconds * sr), 0.0f);
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> noise(-1.0f, 1.0f);
  for (double t = first; t < seconds; t += period) {
    auto start = static_cast<std::size_t>(std::llround(t * sr));
    for (std::size_t k = 0; k < 220 && start + k < a.samples.size(); ++k) {
      a.samples[start + k] = 0.8f * noise(rng) * std::exp(-static_cast<float>(k) / 40.0f);
    }
  }
  return a;
}

std::vector<double> grid(double period, double seconds, double first = 0.0) {
  std::vector<double> g;
  for (double t = first; t < seconds; t += period) g.push_back(t);
  return g;
}

}  // namespace

TEST(BeatTracker, ClickTrackAt120Bpm) {
  auto audio = click_track(0.5, 30.0);
  auto beats = SpectralFluxBeatTracker().estimate(audio);
  ASSERT_TRUE(BeatSeq::is_valid(beats.times));
  auto truth = grid(0.5, 30.0);
  auto c = eval::match_onsets(truth, beats.times, 0.020);
  EXPECT_GE(static_cast<double>(c.tp), 0.9 * static_cast<double>(truth.size()));
  EXPECT_GE(static_cast<double>(c.tp), 0.9 * static_cast<double>(beats.times.size()));
}

TEST(BeatTracker, OtherTemposAndPhase) {
  for (double bpm : {90.0, 140.0}) {
    double period = 60.0 / bpm;
    auto audio = click_track(period, 30.0, 0.23);
    auto beats = SpectralFluxBeatTracker().estimate(audio);
    auto truth = grid(period, 30.0, 0.23);
    auto c = eval::match_onsets(truth, beats.times, 0.020);
    EXPECT_GE(static_cast<double>(c.tp), 0.9 * static_cast<double>(truth.size())) << bpm;
  }
}

TEST(BeatTracker, BeatsStayInsideAudio) {
  auto audio = click_track(0.5, 10.0);
  auto beats = SpectralFluxBeatTracker().estimate(audio);
  ASSERT_FALSE(beats.times.empty());
  EXPECT_GE(beats.times.front(), 0.0);
  EXPECT_LE(beats.times.back(), audio.duration());
}

TEST(BeatTracker, SilenceHasNoBeats) {
  AudioBuffer silent;
  silent.samples.assign(44100 * 5, 0.0f);
  try {
    SpectralFluxBeatTracker().estimate(silent);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBeatsFound);
  }
}
