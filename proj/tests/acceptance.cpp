// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
// if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "adtof/adtof.hpp"
#include "test_support.hpp"

using namespace adtof;
using namespace adtof::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> strictly_increasing(std::vector<double> v) {
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Outcome matching_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1);
  std::size_t disagreements = 0, trials = 0;
  for (int k = 0; k < 1000; ++k, ++trials) {
    auto a = strictly_increasing(random_times(rng, 8, 0.6));
    auto e = strictly_increasing(random_times(rng, 8, 0.6));
    auto best = brute_force_max_matching(a.size(), e.size(), [&](auto i, auto j) { return std::abs(a[i] - e[j]) <= 0.05 + 1e-9; });
    disagreements += match_beats(a, e, 0.05).matched_count() != best;
  }
  for (int k = 0; k < 1000; ++k, ++trials) {
    auto r = random_times(rng, 8, 0.6);
    auto e = random_times(rng, 8, 0.6);
    auto best = brute_force_max_matching(r.size(), e.size(), [&](auto i, auto j) { return std::abs(r[i] - e[j]) <= 0.05 + 1e-9; });
    auto c = eval::match_onsets(r, e, 0.05);
    disagreements += c.tp != best || c.fp != e.size() - best || c.fn != r.size() - best;
  }
  double elapsed = seconds_since(t0);
  return {disagreements == 0 && elapsed < 10.0,
          std::to_string(trials) + " instances, " + std::to_string(disagreements) + " disagreements, " + fmt("%.2f s", elapsed)};
}

Outcome f_measure_arithmetic() {
  double f = eval::scores({1, 1, 0}).f_measure;
  eval::EvalCounts c;
  c.per_class[0] = {1, 0, 0};
  c.per_class[1] = {0, 1, 1};
  auto sum = eval::f_measure(c).sum;
  bool ok = std::abs(f - 2.0 / 3.0) <= 1e-12 && sum.precision == 0.5 && sum.recall == 0.5 && sum.f_measure == 0.5;
  return {ok, "F=" + fmt("%.15f", f) + ", SUM P/R/F=" + fmt("%g", sum.precision) + "/" + fmt("%g", sum.recall) + "/" +
                  fmt("%g", sum.f_measure)};
}

Outcome tolerance_boundary() {
  std::size_t hit = 0, miss = 0, cases = 0;
  for (double r : {0.0, 0.5, 1.0, 3.3, 17.0, 123.456}) {
    for (double sign : {1.0, -1.0}) {
      if (r + sign * 0.05 < 0) continue;
      ++cases;
      std::vector<double> ref = {r}, on = {r + sign * 0.050}, off = {r + sign * (0.050 + 1e-9)};
      hit += eval::match_onsets(ref, on, 0.050).tp == 1;
      miss += eval::match_onsets(ref, off, 0.050).tp == 0;
    }
  }
  return {hit == cases && miss == cases,
          std::to_string(hit) + "/" + std::to_string(cases) + " hits at 0.050 s, " + std::to_string(miss) + "/" +
              std::to_string(cases) + " misses at 0.050 s + 1e-9"};
}

Outcome alignment_identity_and_bound() {
  auto root = temp_dir("acceptance_alignment");
  auto beats = eight_bar_beats();
  write_chart_dir(root / "charts" / "zero", eight_bar_chart(), "A");
  write_text(root / "beats" / "zero.txt", beats_text(beats));
  write_chart_dir(root / "charts" / "shifted", eight_bar_chart(), "B");
  write_text(root / "beats" / "shifted.txt", beats_text(beats, 0.100, 12));

  ConvertConfig cfg;
  cfg.beats_dir = root / "beats";
  cfg.match_window = 0.150;  // wide enough that the 100 ms beat is snapped
  auto zero = convert_track(root / "charts" / "zero", cfg);
  ConvertConfig plain;
  plain.align = false;
  auto direct = convert_track(root / "charts" / "zero", plain);
  double max_diff = zero.onsets.size() == direct.onsets.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(zero.onsets.size(), direct.onsets.size()); ++i) {
    max_diff = std::max(max_diff, std::abs(zero.onsets[i].time - direct.onsets[i].time));
    if (zero.onsets[i].cls != direct.onsets[i].cls) max_diff = 1.0;
  }
  for (std::size_t i = 0; i < std::min(zero.beats.size(), beats.size()); ++i) {
    max_diff = std::max(max_diff, std::abs(zero.beats[i] - beats[i]));
  }

  auto shifted = convert_track(root / "charts" / "shifted", cfg);
  bool discarded = !shifted.record.kept() && shifted.record.discard_reason == DiscardReason::AlignmentSanity &&
                   shifted.record.discard_detail.find(kReasonMaxCorrection) != std::string::npos;

  DeviationProfile p;
  p.anchors = {{1.0, 0.02, true}, {2.0, 0.04, true}};
  double mid = interpolate_deviation(p, 1.5);

  bool ok = zero.record.kept() && max_diff < 1e-12 && discarded && std::abs(mid - 0.03) <= 1e-12;
  return {ok, "zero-deviation max diff " + fmt("%.3g", max_diff) + "; 100 ms fixture " +
                  (discarded ? "discarded (" + shifted.record.discard_detail + ")" : "NOT discarded") +
                  "; interpolation(1.5) = " + fmt("%.15f", mid)};
}

Outcome timing_oracle() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  std::size_t queried = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto tpq = std::uniform_int_distribution<std::uint32_t>(24, 960)(rng);
    const auto end = std::uniform_int_distribution<std::uint64_t>(1, 100000)(rng);
    std::vector<TempoChange> changes;
    int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int k = 0; k < n; ++k) {
      changes.push_back({std::uniform_int_distribution<std::uint64_t>(0, end)(rng),
                         std::uniform_int_distribution<std::uint32_t>(150000, 3000000)(rng)});
    }
    std::stable_sort(changes.begin(), changes.end(), [](auto& a, auto& b) { return a.tick < b.tick; });
    TempoMap map(tpq, changes);
    std::uint32_t tempo = 500000;
    std::size_t next = 0;
    long double acc = 0.0L;
    for (std::uint64_t tick = 0; tick <= end; ++tick) {
      worst = std::max(worst, std::abs(map.tick_to_seconds(tick) - static_cast<double>(acc)));
      ++queried;
      while (next < changes.size() && changes[next].tick <= tick) tempo = changes[next++].us_per_quarter;
      acc += static_cast<long double>(tempo) / (static_cast<long double>(tpq) * 1e6L);
    }
  }
  double example = TempoMap(480, {{0, 500000}, {480, 250000}}).tick_to_seconds(960);
  return {worst <= 1e-9 && example == 0.75,
          std::to_string(queried) + " ticks, max error " + fmt("%.3g s", worst) + ", example " + fmt("%.17g s", example)};
}

Outcome table_totality() {
  using G = GameplayLabel;
  using A = AnimationLabel;
  using C = AdtofClass;
  const std::map<G, C> gameplay = {{G::OrangeDrum, C::BD}, {G::RedDrum, C::SD},         {G::YellowDrum, C::TT},
                                   {G::BlueDrum, C::TT},   {G::GreenDrum, C::TT},       {G::YellowCymbal, C::HH},
                                   {G::BlueCymbal, C::CY_RD}, {G::GreenCymbal, C::CY_RD}};
  const std::map<A, C> animation = {{A::BassDrum, C::BD},   {A::SnareDrum, C::SD},  {A::RackTom1, C::TT}, {A::RackTom2, C::TT},
                                    {A::FloorTom, C::TT},   {A::HiHatOpen, C::HH},  {A::HiHatClose, C::HH},
                                    {A::Crash1, C::CY_RD}, {A::Crash2, C::CY_RD}, {A::RideCymbal, C::CY_RD}};
  std::size_t rows = 0, wrong = 0;
  for (auto l : kAllGameplayLabels) ++rows, wrong += map_gameplay(l) != gameplay.at(l);
  for (auto l : kAllAnimationLabels) ++rows, wrong += map_animation(l) != animation.at(l);

  std::vector<TimedEvent<G>> flam_g = {{2.0, G::RedDrum}, {2.0, G::YellowDrum}};
  std::vector<TimedEvent<A>> flam_a = {{2.0, A::SnareDrum}};
  auto flam = resolve_track(flam_g, flam_a).onsets;
  std::vector<TimedEvent<G>> acc_g = {{1.0, G::GreenCymbal}};
  std::vector<TimedEvent<A>> acc_a = {{1.0, A::HiHatOpen}};
  auto accent = resolve_track(acc_g, acc_a).onsets;
  bool flam_ok = flam.size() == 1 && flam[0].cls == C::SD && flam[0].time == 2.0;
  bool accent_ok = accent.size() == 1 && accent[0].cls == C::HH;
  return {wrong == 0 && rows == 18 && flam_ok && accent_ok,
          std::to_string(rows - wrong) + "/18 rows; flam -> " + (flam_ok ? "single SD" : "WRONG") + "; accent -> " +
              (accent_ok ? "HH" : "WRONG")};
}

Outcome feature_shape() {
  AudioBuffer second;
  second.samples.assign(44100, 0.0f);
  auto f = features::compute_features(second);
  bool silent = std::all_of(f.frames.begin(), f.frames.end(), [](float v) { return v == 0.0f; });

  const double bin_hz = 44100.0 / 2048.0;
  std::set<long long> bins;
  for (int k = 0;; ++k) {
    double hz = 20.0 * std::pow(2.0, k / 12.0);
    if (hz > 20000.0) break;
    long long b = std::llround(hz / bin_hz);
    if (b * bin_hz >= 20.0 && b * bin_hz <= 20000.0 && b <= 1024) bins.insert(b);
  }
  bool ok = f.n_frames == 100 && f.frame_rate == 100.0 && silent && f.n_bands == bins.size();
  return {ok, std::to_string(f.n_frames) + " frames at " + fmt("%g Hz", f.frame_rate) + ", silence " +
                  (silent ? "all zero" : "NONZERO") + ", " + std::to_string(f.n_bands) + " bands vs " +
                  std::to_string(bins.size()) + " distinct center bins"};
}

Outcome split_soundness() {
  std::mt19937_64 rng(3);
  std::size_t violations = 0, manifests = 0;
  for (int m = 0; m < 20; ++m) {
    std::size_t n_artists = 10 + rng() % 91;
    std::size_t n_tracks = n_artists + rng() % (501 - n_artists);
    std::vector<TrackRecord> recs;
    for (std::size_t i = 0; i < n_tracks; ++i) {
      TrackRecord r;
      r.id = "t" + std::to_string(i);
      // Every artist gets at least one track; the rest are skewed.
      std::size_t artist = i < n_artists ? i : static_cast<std::size_t>(std::pow(static_cast<double>(rng() % 1000) / 1000.0, 2.0) * n_artists);
      r.artist = "artist" + std::to_string(artist);
      recs.push_back(r);
    }
    std::map<std::string, std::size_t> group;
    for (auto& r : recs) ++group[r.artist];
    std::size_t largest = 0;
    for (auto& [a, n] : group) largest = std::max(largest, n);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      ++manifests;
      auto a = build_splits(recs, 10, seed);
      std::map<std::string, std::set<std::size_t>> folds;
      std::vector<std::size_t> size(10, 0);
      for (auto& r : recs) {
        folds[r.artist].insert(a.at(r.id));
        ++size[a.at(r.id)];
      }
      bool spans = std::any_of(folds.begin(), folds.end(), [](auto& kv) { return kv.second.size() != 1; });
      auto [lo, hi] = std::minmax_element(size.begin(), size.end());
      violations += spans || (*hi - *lo) > largest || a.size() != recs.size();
    }
  }
  return {violations == 0, std::to_string(manifests) + " assignments (20 manifests x 100 seeds), " + std::to_string(violations) +
                               " violations"};
}

Outcome end_to_end() {
  auto root = temp_dir("acceptance_e2e");
  write_chart_dir(root / "charts" / "eight_bars", eight_bar_chart(), "Fixture");
  write_text(root / "beats" / "eight_bars.txt", beats_text(eight_bar_beats()));
  ConvertConfig cfg;
  cfg.beats_dir = root / "beats";
  auto t0 = std::chrono::steady_clock::now();
  run_convert(root / "charts", root / "out", cfg);
  double elapsed = seconds_since(t0);
  std::string tsv = text::read_file(root / "out" / "annotations" / "eight_bars.tsv");
  bool exact = tsv == kEightBarGolden;
  return {exact && elapsed < 1.0, std::string(exact ? "byte-exact" : "MISMATCH") + " golden TSV, " + fmt("%.3f s", elapsed)};
}

Outcome beat_estimator() {
  AudioBuffer audio;
  const double seconds = 30.0;
  audio.samples.assign(static_cast<std::size_t>(seconds * 44100), 0.0f);
  std::vector<double> truth;
  for (double t = 0.0; t < seconds; t += 0.5) {
    truth.push_back(t);
    auto start = static_cast<std::size_t>(std::llround(t * 44100));
    for (std::size_t k = 0; k < 64 && start + k < audio.samples.size(); ++k) {
      audio.samples[start + k] = (k % 2 ? -0.9f : 0.9f) * std::exp(-static_cast<float>(k) / 16.0f);
    }
  }
  auto beats = SpectralFluxBeatTracker().estimate(audio).times;
  std::size_t good = 0;
  for (double b : beats) {
    double nearest = std::round(b / 0.5) * 0.5;
    good += std::abs(b - nearest) <= 0.020 + 1e-9;
  }
  std::size_t covered = eval::match_onsets(truth, beats, 0.020).tp;
  double frac = beats.empty() ? 0.0 : static_cast<double>(good) / static_cast<double>(beats.size());
  double recall = static_cast<double>(covered) / static_cast<double>(truth.size());
  return {frac >= 0.9 && recall >= 0.9, std::to_string(good) + "/" + std::to_string(beats.size()) + " estimates within 20 ms, " +
                                            std::to_string(covered) + "/" + std::to_string(truth.size()) + " grid beats found"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"matching-oracle", matching_oracle},
      {"f-measure-arithmetic", f_measure_arithmetic},
      {"tolerance-boundary", tolerance_boundary},
      {"alignment-identity-and-bound", alignment_identity_and_bound},
      {"timing-oracle", timing_oracle},
      {"label-table-totality", table_totality},
      {"feature-shape", feature_shape},
      {"split-soundness", split_soundness},
      {"end-to-end-fixture", end_to_end},
      {"beat-estimator-sanity", beat_estimator},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
