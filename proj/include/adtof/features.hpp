#pragma once

// Log-frequency, log-magnitude spectrogram: centered Hann-windowed STFT,
// triangular filters spaced per octave, then log(1 + x).

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "adtof/audio.hpp"
#include "adtof/error.hpp"
#include "adtof/text.hpp"

namespace adtof::features {

enum class WindowKind { Hann, Rectangular };

struct StftConfig {
  std::size_t window = 2048;
  std::size_t hop = 441;
  WindowKind window_kind = WindowKind::Hann;
  bool centered = true;  // frame i is centered on sample i*hop
};

struct ComplexSpectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;
  std::uint32_t sample_rate = 0;
  std::size_t hop = 0;
  std::vector<std::complex<float>> data;  // row-major (frame, bin)

  std::complex<float> at(std::size_t frame, std::size_t bin) const { return data[frame * n_bins + bin]; }
};

inline std::vector<double> make_window(std::size_t n, WindowKind kind) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::Hann && n > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
    }
  }
  return w;
}

namespace detail {

// FFTW's planner is not reentrant; execution on distinct buffers is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    out_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::span<double> input() { return {in_, n_}; }
  std::span<const fftw_complex> output() const { return {out_, n_ / 2 + 1}; }
  void execute() { fftw_execute(plan_); }

private:
  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

inline std::size_t frame_count(std::size_t n_samples, std::size_t hop) { return (n_samples + hop - 1) / hop; }

// Loads the windowed frame `i` into `dst`, zero-padding outside the signal.
inline void load_frame(std::span<const float> x, std::size_t i, const StftConfig& cfg, std::span<const double> window,
                       std::span<double> dst) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto start = static_cast<std::ptrdiff_t>(i * cfg.hop) - (cfg.centered ? static_cast<std::ptrdiff_t>(cfg.window / 2) : 0);
  for (std::size_t k = 0; k < cfg.window; ++k) {
    auto s = start + static_cast<std::ptrdiff_t>(k);
    dst[k] = (s >= 0 && s < n) ? static_cast<double>(x[static_cast<std::size_t>(s)]) * window[k] : 0.0;
  }
}

// Runs `body(first, last)` over frame ranges on up to `jobs` threads.
template <typename Body>
void for_frame_ranges(std::size_t n_frames, unsigned jobs, Body body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n_frames / 64))));
  if (jobs == 1) {
    body(std::size_t{0}, n_frames);
    return;
  }
  std::vector<std::jthread> workers;
  std::size_t per = (n_frames + jobs - 1) / jobs;
  for (unsigned j = 0; j < jobs; ++j) {
    std::size_t first = j * per, last = std::min(n_frames, first + per);
    if (first >= last) break;
    workers.emplace_back([&body, first, last] { body(first, last); });
  }
}

}  // namespace detail

inline void validate(const AudioBuffer& audio, const StftConfig& cfg) {
  if (audio.samples.empty()) throw Error(ErrorCode::EmptyAudio, "audio has no samples");
  if (cfg.window == 0 || cfg.hop == 0) throw Error(ErrorCode::InvalidArgument, "window and hop must be positive");
  if (audio.sample_rate == 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
}

/// Frame count is ceil(n_samples / hop); only the non-negative frequency
/// bins (window/2 + 1) are kept.
inline ComplexSpectrogram stft(const AudioBuffer& audio, const StftConfig& cfg = {}, unsigned jobs = 1) {
  validate(audio, cfg);
  ComplexSpectrogram spec;
  spec.n_frames = detail::frame_count(audio.samples.size(), cfg.hop);
  spec.n_bins = cfg.window / 2 + 1;
  spec.sample_rate = audio.sample_rate;
  spec.hop = cfg.hop;
  spec.data.resize(spec.n_frames * spec.n_bins);
  const auto window = make_window(cfg.window, cfg.window_kind);

  detail::for_frame_ranges(spec.n_frames, jobs, [&](std::size_t first, std::size_t last) {
    detail::RealFft fft(cfg.window);
    for (std::size_t i = first; i < last; ++i) {
      detail::load_frame(audio.samples, i, cfg, window, fft.input());
      fft.execute();
      auto out = fft.output();
      for (std::size_t b = 0; b < spec.n_bins; ++b) {
        spec.data[i * spec.n_bins + b] = {static_cast<float>(out[b][0]), static_cast<float>(out[b][1])};
      }
    }
  });
  return spec;
}

/// One triangular filter stored sparsely from `first_bin`.
struct Filter {
  std::size_t center_bin = 0;
  std::size_t first_bin = 0;
  std::vector<float> weights;
};

struct Filterbank {
  std::size_t n_bins = 0;
  std::vector<Filter> filters;
  std::vector<double> center_frequencies;

  std::size_t n_bands() const { return filters.size(); }

  float weight(std::size_t band, std::size_t bin) const {
    const auto& f = filters[band];
    if (bin < f.first_bin || bin >= f.first_bin + f.weights.size()) return 0.0f;
    return f.weights[bin - f.first_bin];
  }
};

/// Target center frequencies f_min * 2^(k / bands_per_octave) up to f_max.
inline std::vector<double> log_frequencies(double f_min, double f_max, unsigned bands_per_octave) {
  std::vector<double> freqs;
  for (unsigned k = 0;; ++k) {
    double f = f_min * std::pow(2.0, static_cast<double>(k) / bands_per_octave);
    if (f > f_max * (1.0 + 1e-12)) break;
    freqs.push_back(f);
  }
  return freqs;
}

/// Triangular filters on the FFT bin axis. Target centers are rounded to the
/// nearest bin, repeated bins merged and bins whose frequency falls outside
/// [f_min, min(f_max, Nyquist)] dropped. Each triangle rises from the previous
/// center to 1 at its own center and falls to the next center; the outermost
/// filters are one-sided.
inline Filterbank log_filterbank(std::size_t n_fft_bins, std::uint32_t sample_rate, unsigned bands_per_octave = 12,
                                 double f_min = 20.0, double f_max = 20000.0) {
  if (n_fft_bins < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 FFT bins");
  if (bands_per_octave == 0) throw Error(ErrorCode::InvalidArgument, "bands per octave must be positive");
  const double nyquist = sample_rate / 2.0;
  f_max = std::min(f_max, nyquist);
  if (!(f_min > 0.0) || !(f_min < f_max)) {
    throw Error(ErrorCode::InvalidRange, "need 0 < f_min < min(f_max, Nyquist)");
  }
  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(2 * (n_fft_bins - 1));

  std::vector<std::size_t> centers;
  for (double f : log_frequencies(f_min, f_max, bands_per_octave)) {
    auto bin = static_cast<std::size_t>(std::llround(f / bin_hz));
    double bin_f = static_cast<double>(bin) * bin_hz;
    if (bin >= n_fft_bins || bin_f < f_min || bin_f > f_max) continue;
    if (centers.empty() || centers.back() != bin) centers.push_back(bin);
  }

  Filterbank fb;
  fb.n_bins = n_fft_bins;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    std::size_t c = centers[i];
    std::size_t left = i > 0 ? centers[i - 1] : c;
    std::size_t right = i + 1 < centers.size() ? centers[i + 1] : c;
    Filter f;
    f.center_bin = c;
    f.first_bin = left;
    for (std::size_t j = left; j <= right; ++j) {
      double w = 1.0;
      if (j < c) w = static_cast<double>(j - left) / static_cast<double>(c - left);
      if (j > c) w = static_cast<double>(right - j) / static_cast<double>(right - c);
      f.weights.push_back(static_cast<float>(w));
    }
    fb.filters.push_back(std::move(f));
    fb.center_frequencies.push_back(static_cast<double>(c) * bin_hz);
  }
  return fb;
}

struct LogCompression {
  double add = 1.0;
  double base = 10.0;

  double operator()(double x) const { return std::log(add + x) / std::log(base); }
};

struct LogSpectrogram {
  std::size_t n_frames = 0;
  std::size_t n_bands = 0;
  double frame_rate = 0.0;
  std::vector<double> band_center_frequencies;
  std::vector<float> frames;  // row-major (frame, band)

  float at(std::size_t frame, std::size_t band) const { return frames[frame * n_bands + band]; }
};

namespace detail {

template <typename Magnitude>
void apply_filterbank_row(const Filterbank& fb, const LogCompression& log, Magnitude mag, float* row) {
  for (std::size_t b = 0; b < fb.filters.size(); ++b) {
    const auto& f = fb.filters[b];
    double acc = 0.0;
    for (std::size_t k = 0; k < f.weights.size(); ++k) acc += f.weights[k] * mag(f.first_bin + k);
    row[b] = static_cast<float>(log(acc));
  }
}

}  // namespace detail

/// log(add + filterbank . |X|) per frame.
inline LogSpectrogram log_magnitude(const ComplexSpectrogram& spec, const Filterbank& fb, const LogCompression& log = {}) {
  if (spec.n_bins != fb.n_bins) {
    throw Error(ErrorCode::DimensionMismatch, "spectrogram has " + std::to_string(spec.n_bins) + " bins, filterbank expects " +
                                                  std::to_string(fb.n_bins));
  }
  LogSpectrogram out;
  out.n_frames = spec.n_frames;
  out.n_bands = fb.n_bands();
  out.frame_rate = spec.hop ? static_cast<double>(spec.sample_rate) / static_cast<double>(spec.hop) : 0.0;
  out.band_center_frequencies = fb.center_frequencies;
  out.frames.resize(out.n_frames * out.n_bands);
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    const std::complex<float>* row = spec.data.data() + i * spec.n_bins;
    detail::apply_filterbank_row(fb, log, [row](std::size_t bin) { return static_cast<double>(std::abs(row[bin])); },
                                 out.frames.data() + i * out.n_bands);
  }
  return out;
}

struct FeatureConfig {
  StftConfig stft;
  unsigned bands_per_octave = 12;
  double f_min = 20.0;
  double f_max = 20000.0;
  LogCompression log;
};

/// Streaming equivalent of log_magnitude(stft(audio), log_filterbank(...)):
/// magnitudes are consumed frame by frame instead of materialized.
inline LogSpectrogram compute_features(const AudioBuffer& audio, const FeatureConfig& cfg = {}, unsigned jobs = 1) {
  validate(audio, cfg.stft);
  const std::size_t n_bins = cfg.stft.window / 2 + 1;
  Filterbank fb = log_filterbank(n_bins, audio.sample_rate, cfg.bands_per_octave, cfg.f_min, cfg.f_max);
  LogSpectrogram out;
  out.n_frames = detail::frame_count(audio.samples.size(), cfg.stft.hop);
  out.n_bands = fb.n_bands();
  out.frame_rate = static_cast<double>(audio.sample_rate) / static_cast<double>(cfg.stft.hop);
  out.band_center_frequencies = fb.center_frequencies;
  out.frames.resize(out.n_frames * out.n_bands);
  const auto window = make_window(cfg.stft.window, cfg.stft.window_kind);

  detail::for_frame_ranges(out.n_frames, jobs, [&](std::size_t first, std::size_t last) {
    detail::RealFft fft(cfg.stft.window);
    for (std::size_t i = first; i < last; ++i) {
      detail::load_frame(audio.samples, i, cfg.stft, window, fft.input());
      fft.execute();
      auto bins = fft.output();
      detail::apply_filterbank_row(
          fb, cfg.log,
          [&bins](std::size_t b) {
            // Same rounding path as stft(): single precision before |.|.
            return static_cast<double>(std::abs(std::complex<float>(static_cast<float>(bins[b][0]), static_cast<float>(bins[b][1]))));
          },
          out.frames.data() + i * out.n_bands);
    }
  });
  return out;
}

// --- feature file: "ADTF", u32 version, u32 n_frames, u32 n_bands,
// f64 frame_rate, then row-major little-endian float32.

inline constexpr std::uint32_t kFeatureFileVersion = 1;

struct FeatureMatrix {
  std::size_t n_frames = 0;
  std::size_t n_bands = 0;
  double frame_rate = 0.0;
  std::vector<float> values;

  float at(std::size_t frame, std::size_t band) const { return values[frame * n_bands + band]; }
};

inline std::vector<std::uint8_t> encode_feature_file(const FeatureMatrix& m) {
  if (m.values.size() != m.n_frames * m.n_bands) throw Error(ErrorCode::DimensionMismatch, "feature matrix size");
  std::vector<std::uint8_t> out = {'A', 'D', 'T', 'F'};
  auto put_u32 = [&](std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  auto put_u64 = [&](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  put_u32(kFeatureFileVersion);
  put_u32(static_cast<std::uint32_t>(m.n_frames));
  put_u32(static_cast<std::uint32_t>(m.n_bands));
  std::uint64_t rate_bits;
  std::memcpy(&rate_bits, &m.frame_rate, 8);
  put_u64(rate_bits);
  out.reserve(out.size() + m.values.size() * 4);
  for (float f : m.values) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(bits);
  }
  return out;
}

inline FeatureMatrix decode_feature_file(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 4 + 4 + 4 + 4 + 8;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), "ADTF", 4) != 0) {
    throw Error(ErrorCode::BadFeatureFile, "missing ADTF header");
  }
  auto u32 = [&](std::size_t off) {
    return std::uint32_t{bytes[off]} | (std::uint32_t{bytes[off + 1]} << 8) | (std::uint32_t{bytes[off + 2]} << 16) |
           (std::uint32_t{bytes[off + 3]} << 24);
  };
  if (u32(4) != kFeatureFileVersion) throw Error(ErrorCode::BadFeatureFile, "unsupported version " + std::to_string(u32(4)));
  FeatureMatrix m;
  m.n_frames = u32(8);
  m.n_bands = u32(12);
  std::uint64_t rate_bits = std::uint64_t{u32(16)} | (std::uint64_t{u32(20)} << 32);
  std::memcpy(&m.frame_rate, &rate_bits, 8);
  const std::size_t count = m.n_frames * m.n_bands;
  if (bytes.size() != kHeader + count * 4) throw Error(ErrorCode::BadFeatureFile, "body size does not match header");
  m.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = u32(kHeader + 4 * i);
    std::memcpy(&m.values[i], &bits, 4);
  }
  return m;
}

inline FeatureMatrix to_matrix(const LogSpectrogram& s) { return {s.n_frames, s.n_bands, s.frame_rate, s.frames}; }

}  // namespace adtof::features
