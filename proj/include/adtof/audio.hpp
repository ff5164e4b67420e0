#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/text.hpp"

namespace adtof {

/// Mono audio; samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  std::uint32_t sample_rate = 44100;

  double duration() const { return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0; }
};

namespace detail {

inline std::uint32_t le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}
inline std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

}  // namespace detail

/// Decodes a PCM WAV file (16/24/32-bit integer or 32-bit float, any
/// channel count). Channels are averaged to mono.
inline AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  using detail::le16;
  using detail::le32;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::BadWav, "not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_fmt = false, have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* h = bytes.data() + pos;
    std::uint32_t len = le32(h + 4);
    std::size_t body = pos + 8;
    std::size_t avail = bytes.size() - body;
    if (std::memcmp(h, "fmt ", 4) == 0) {
      if (len < 16 || len > avail) throw Error(ErrorCode::BadWav, "bad fmt chunk");
      format = le16(h + 8);
      channels = le16(h + 10);
      rate = le32(h + 12);
      bits = le16(h + 22);
      if (format == 0xFFFE && len >= 40) format = le16(h + 8 + 24);  // extensible: sub-format GUID prefix
      have_fmt = true;
    } else if (std::memcmp(h, "data", 4) == 0) {
      // Tolerate a data length running past the end (streamed writers).
      data = bytes.subspan(body, std::min<std::size_t>(len, avail));
      have_data = true;
      if (len > avail) break;
    }
    if (len > avail) break;
    pos = body + len + (len & 1);
  }
  if (!have_fmt || !have_data) throw Error(ErrorCode::BadWav, "missing fmt or data chunk");
  if (channels == 0 || rate == 0) throw Error(ErrorCode::BadWav, "zero channels or sample rate");
  bool is_int = format == 1 && (bits == 16 || bits == 24 || bits == 32);
  bool is_float = format == 3 && bits == 32;
  if (!is_int && !is_float) {
    throw Error(ErrorCode::BadWav, "unsupported encoding (format " + std::to_string(format) + ", " +
                                       std::to_string(bits) + " bits)");
  }

  const std::size_t width = bits / 8;
  const std::size_t frame_bytes = width * channels;
  const std::size_t n = data.size() / frame_bytes;
  AudioBuffer out;
  out.sample_rate = rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data.data() + i * frame_bytes + c * width;
      double v = 0.0;
      if (is_float) {
        float f;
        std::uint32_t raw = le32(p);
        std::memcpy(&f, &raw, 4);
        v = f;
      } else if (bits == 16) {
        v = static_cast<std::int16_t>(le16(p)) / 32768.0;
      } else if (bits == 24) {
        std::int32_t s = static_cast<std::int32_t>((std::uint32_t{p[0]} << 8) | (std::uint32_t{p[1]} << 16) |
                                                   (std::uint32_t{p[2]} << 24)) >> 8;
        v = s / 8388608.0;
      } else {
        v = static_cast<std::int32_t>(le32(p)) / 2147483648.0;
      }
      acc += v;
    }
    out.samples[i] = static_cast<float>(acc / channels);
  }
  return out;
}

inline AudioBuffer read_wav(const std::filesystem::path& path) { return decode_wav(text::read_binary(path)); }

/// Encodes mono 32-bit float WAV.
inline std::vector<std::uint8_t> encode_wav(const AudioBuffer& audio) {
  std::vector<std::uint8_t> out;
  auto u32 = [&](std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  auto tag = [&](const char* t) { out.insert(out.end(), t, t + 4); };
  const auto data_len = static_cast<std::uint32_t>(audio.samples.size() * 4);
  tag("RIFF");
  u32(36 + data_len);
  tag("WAVE");
  tag("fmt ");
  u32(16);
  u16(3);
  u16(1);
  u32(audio.sample_rate);
  u32(audio.sample_rate * 4);
  u16(4);
  u16(32);
  tag("data");
  u32(data_len);
  for (float f : audio.samples) {
    std::uint32_t raw;
    std::memcpy(&raw, &f, 4);
    u32(raw);
  }
  return out;
}

}  // namespace adtof
