// adtof: command-line front end for the chart curation toolchain.
//
// Exit codes: 0 success, 1 usage error, 2 fatal I/O. Per-track failures
// during `convert` are manifest entries, not process failures.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adtof/adtof.hpp"
#include "adtof/plot.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

int exit_code_for(const adtof::Error& e) {
  switch (e.code()) {
    case adtof::ErrorCode::InvalidArgument:
    case adtof::ErrorCode::InvalidRange:
    case adtof::ErrorCode::TooFewArtists:
      return kExitUsage;
    default:
      return kExitIo;
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    adtof::text::write_file_atomic(path, content);
  }
}

struct ConvertArgs {
  std::string input, output, beats_dir, pitch_map;
  bool no_align = false;
  double match_window_ms = 50.0;
  double max_correction_ms = 80.0;
  double min_matched_fraction = 0.5;
  double chord_window_ms = 10.0;
  unsigned jobs = 1;
};

int run_convert(const ConvertArgs& a) {
  adtof::ConvertConfig cfg;
  if (!a.pitch_map.empty()) cfg.pitch_map = adtof::parse_pitch_map(adtof::text::read_file(a.pitch_map));
  cfg.align = !a.no_align;
  if (!a.beats_dir.empty()) {
    if (!fs::is_directory(a.beats_dir)) throw adtof::Error(adtof::ErrorCode::Io, "beats directory not found: " + a.beats_dir);
    cfg.beats_dir = a.beats_dir;
  }
  cfg.match_window = a.match_window_ms / 1000.0;
  cfg.limits.max_correction = a.max_correction_ms / 1000.0;
  cfg.limits.min_matched_fraction = a.min_matched_fraction;
  cfg.chord_window = a.chord_window_ms / 1000.0;
  cfg.jobs = a.jobs;

  auto manifest = adtof::run_convert(a.input, a.output, cfg, [](const adtof::TrackRecord& r) {
    if (!r.kept()) {
      std::cerr << "discarded " << r.id << " (" << adtof::discard_reason_name(r.discard_reason) << "): " << r.discard_detail
                << "\n";
    }
  });
  std::size_t kept = 0;
  for (const auto& r : manifest.tracks) kept += r.kept();
  std::cerr << "converted " << manifest.tracks.size() << " tracks: " << kept << " kept, " << manifest.tracks.size() - kept
            << " discarded\n";
  return 0;
}

int run_split(const std::string& manifest_path, std::size_t folds, std::uint64_t seed, const std::string& out) {
  auto manifest = adtof::load_manifest(manifest_path);
  auto assignment = adtof::build_splits(manifest.tracks, folds, seed);
  write_output(out, adtof::format_splits(assignment));
  return 0;
}

int run_stats(const std::string& manifest_path, const std::string& plot_path, const std::string& out) {
  auto manifest = adtof::load_manifest(manifest_path);
  auto stats = adtof::compute_stats(manifest.tracks);
  write_output(out, adtof::format_stats(stats));
  if (!plot_path.empty()) {
    std::vector<std::pair<std::string, std::size_t>> bars(stats.genre_counts.begin(), stats.genre_counts.end());
    std::stable_sort(bars.begin(), bars.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    adtof::plot::write_png(plot_path, adtof::plot::render_bar_chart(bars));
  }
  return 0;
}

struct EvalArgs {
  std::string ref, est, folds, out;
  double window_ms = 50.0;
  double empty_score = 1.0;
  adtof::eval::PeakPickConfig peaks;
};

adtof::OnsetsByClass load_estimate(const fs::path& dir, const std::string& id, const adtof::eval::PeakPickConfig& peaks) {
  auto tsv = dir / (id + ".tsv");
  if (fs::exists(tsv)) return adtof::split_by_class(adtof::parse_annotations(adtof::text::read_file(tsv)));
  auto act_path = dir / (id + ".adtf");
  if (fs::exists(act_path)) {
    auto m = adtof::features::decode_feature_file(adtof::text::read_binary(act_path));
    if (m.n_bands != adtof::kNumClasses) {
      throw adtof::Error(adtof::ErrorCode::BadFeatureFile, act_path.string() + ": activation needs 5 columns");
    }
    adtof::eval::Activation act;
    act.frame_rate = m.frame_rate;
    for (std::size_t c = 0; c < adtof::kNumClasses; ++c) {
      for (std::size_t i = 0; i < m.n_frames; ++i) act.series[c].push_back(m.at(i, c));
    }
    return adtof::eval::peak_pick(act, peaks);
  }
  std::cerr << "warning: no estimate for " << id << ", counted as empty\n";
  return {};
}

int run_eval(const EvalArgs& a) {
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(a.ref)) {
    if (e.is_regular_file() && e.path().extension() == ".tsv") ids.push_back(e.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());

  std::optional<adtof::SplitAssignment> folds;
  if (!a.folds.empty()) folds = adtof::parse_splits(adtof::text::read_file(a.folds));

  const double window = a.window_ms / 1000.0;
  std::map<std::size_t, adtof::eval::EvalCounts> per_fold;
  for (const auto& id : ids) {
    std::size_t fold = 0;
    if (folds) {
      auto it = folds->find(id);
      if (it == folds->end()) {
        std::cerr << "warning: " << id << " has no fold, skipped\n";
        continue;
      }
      fold = it->second;
    }
    auto ref = adtof::split_by_class(adtof::parse_annotations(adtof::text::read_file(fs::path(a.ref) / (id + ".tsv"))));
    auto est = load_estimate(a.est, id, a.peaks);
    per_fold[fold] += adtof::eval::match_track(ref, est, window);
  }
  std::vector<adtof::eval::EvalCounts> counts;
  for (auto& [fold, c] : per_fold) counts.push_back(c);
  if (counts.empty()) counts.emplace_back();
  write_output(a.out, adtof::eval::format_report(adtof::eval::aggregate_folds(counts, a.empty_score)));
  return 0;
}

struct FeatureArgs {
  std::string audio, out;
  std::size_t window = 2048, hop = 441;
  unsigned bands_per_octave = 12;
  double fmin = 20.0, fmax = 20000.0;
  unsigned jobs = 1;
};

int run_features(const FeatureArgs& a) {
  auto audio = adtof::read_wav(a.audio);
  if (audio.sample_rate < 40000) {
    std::cerr << "warning: sample rate " << audio.sample_rate << " Hz caps the upper band edge at Nyquist\n";
  }
  if (audio.sample_rate != 44100) {
    std::cerr << "note: sample rate " << audio.sample_rate << " Hz gives a frame rate of "
              << static_cast<double>(audio.sample_rate) / static_cast<double>(a.hop) << " Hz\n";
  }
  adtof::features::FeatureConfig cfg;
  cfg.stft.window = a.window;
  cfg.stft.hop = a.hop;
  cfg.bands_per_octave = a.bands_per_octave;
  cfg.f_min = a.fmin;
  cfg.f_max = a.fmax;
  auto spec = adtof::features::compute_features(audio, cfg, a.jobs);
  auto bytes = adtof::features::encode_feature_file(adtof::features::to_matrix(spec));
  adtof::text::write_file_atomic(a.out, std::string(bytes.begin(), bytes.end()));
  std::cerr << spec.n_frames << " frames x " << spec.n_bands << " bands at " << spec.frame_rate << " Hz\n";
  return 0;
}

int run_flag(const std::string& manifest_path, const std::string& scores_path, double fraction, bool discard) {
  auto manifest = adtof::load_manifest(manifest_path);
  auto scores = adtof::parse_scores(adtof::text::read_file(scores_path));
  auto result = adtof::score_filter(manifest.tracks, scores, fraction, discard);
  for (const auto& id : result.unknown_ids) std::cerr << "warning: unknown track id in scores: " << id << "\n";
  adtof::save_manifest(manifest_path, manifest);
  for (const auto& id : result.flagged) std::cout << id << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curate rhythm-game drum charts into a drum transcription dataset"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Convert a directory of chart directories");
  convert->add_option("--input", conv.input, "Directory containing one subdirectory per chart")->required();
  convert->add_option("--output", conv.output, "Output directory")->required();
  convert->add_option("--beats-dir", conv.beats_dir, "Precomputed beats, <id>.txt per track");
  convert->add_flag("--no-align", conv.no_align, "Skip beat alignment and sanity checks");
  convert->add_option("--match-window-ms", conv.match_window_ms, "Beat snapping window")->capture_default_str()->check(CLI::PositiveNumber);
  convert->add_option("--max-correction-ms", conv.max_correction_ms, "Largest allowed correction")->capture_default_str()->check(CLI::PositiveNumber);
  convert->add_option("--min-matched-fraction", conv.min_matched_fraction, "Required fraction of matched beats")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  convert->add_option("--chord-window-ms", conv.chord_window_ms, "Chord grouping window")->capture_default_str()->check(CLI::PositiveNumber);
  convert->add_option("--pitch-map", conv.pitch_map, "Pitch map file");
  convert->add_option("--jobs", conv.jobs, "Worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  std::string split_manifest, split_out;
  std::size_t split_folds = 10;
  std::uint64_t split_seed = 0;
  auto* split = app.add_subcommand("split", "Build artist-disjoint folds");
  split->add_option("--manifest", split_manifest)->required();
  split->add_option("--folds", split_folds)->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  split->add_option("--seed", split_seed)->required();
  split->add_option("--out", split_out, "Splits TSV (stdout if omitted)");

  std::string stats_manifest, stats_plot, stats_out;
  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  stats->add_option("--manifest", stats_manifest)->required();
  stats->add_option("--plot", stats_plot, "Genre histogram PNG");
  stats->add_option("--out", stats_out, "Statistics TSV (stdout if omitted)");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate estimates against reference annotations");
  eval->add_option("--ref", ev.ref)->required();
  eval->add_option("--est", ev.est, "Estimated <id>.tsv or activation <id>.adtf files")->required();
  eval->add_option("--window-ms", ev.window_ms)->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--folds", ev.folds, "Splits TSV; scores are averaged over folds");
  eval->add_option("--empty-score", ev.empty_score, "Score when a class has no reference and no estimate")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--threshold", ev.peaks.threshold)->capture_default_str();
  eval->add_option("--pre-max", ev.peaks.pre_max)->capture_default_str();
  eval->add_option("--post-max", ev.peaks.post_max)->capture_default_str();
  eval->add_option("--avg-window", ev.peaks.avg_window)->capture_default_str();
  eval->add_option("--min-distance", ev.peaks.min_distance)->capture_default_str();
  eval->add_option("--out", ev.out, "Report TSV (stdout if omitted)");

  FeatureArgs fa;
  auto* feat = app.add_subcommand("features", "Compute the log-frequency log-magnitude spectrogram");
  feat->add_option("--audio", fa.audio)->required();
  feat->add_option("--out", fa.out)->required();
  feat->add_option("--window", fa.window)->capture_default_str()->check(CLI::PositiveNumber);
  feat->add_option("--hop", fa.hop)->capture_default_str()->check(CLI::PositiveNumber);
  feat->add_option("--bands-per-octave", fa.bands_per_octave)->capture_default_str()->check(CLI::PositiveNumber);
  feat->add_option("--fmin", fa.fmin)->capture_default_str();
  feat->add_option("--fmax", fa.fmax)->capture_default_str();
  feat->add_option("--jobs", fa.jobs)->capture_default_str()->check(CLI::Range(1u, 1024u));

  std::string flag_manifest, flag_scores;
  double flag_fraction = 0.10;
  bool flag_discard = false;
  auto* flag = app.add_subcommand("flag", "Flag the lowest-scoring tracks for review");
  flag->add_option("--manifest", flag_manifest)->required();
  flag->add_option("--scores", flag_scores, "track_id<TAB>score lines")->required();
  flag->add_option("--fraction", flag_fraction)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  flag->add_flag("--discard-flagged", flag_discard);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*convert) return run_convert(conv);
    if (*split) return run_split(split_manifest, split_folds, split_seed, split_out);
    if (*stats) return run_stats(stats_manifest, stats_plot, stats_out);
    if (*eval) return run_eval(ev);
    if (*feat) return run_features(fa);
    if (*flag) return run_flag(flag_manifest, flag_scores, flag_fraction, flag_discard);
  } catch (const adtof::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
