#pragma once

// Standard MIDI File reader (formats 0 and 1, PPQ division) and a minimal
// writer used for fixtures and round-trip checks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"

namespace adtof::midi {

enum class EventKind : std::uint8_t { NoteOn, NoteOff, TempoChange, TrackName, OtherMeta };

struct RawMidiEvent {
  std::uint64_t tick = 0;  // absolute
  EventKind kind = EventKind::OtherMeta;
  std::uint8_t pitch = 0;
  std::uint8_t velocity = 0;
  std::uint32_t tempo_us_per_quarter = 0;
  std::string text;

  friend bool operator==(const RawMidiEvent&, const RawMidiEvent&) = default;
};

using Track = std::vector<RawMidiEvent>;

struct SmfFile {
  std::uint16_t format = 0;
  std::uint32_t ticks_per_quarter = 480;
  std::vector<Track> tracks;
};

namespace detail {

class ByteReader {
public:
  explicit ByteReader(std::span<const std::uint8_t> bytes, std::size_t base = 0) : bytes_(bytes), base_(base) {}

  // Offset within the enclosing file.
  std::size_t offset() const { return base_ + pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  void require(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw ParseError(ErrorCode::TruncatedFile, offset(), std::string("unexpected end of data reading ") + what);
    }
  }

  std::uint8_t u8(const char* what = "byte") {
    require(1, what);
    return bytes_[pos_++];
  }

  std::uint8_t peek() const {
    require(1, "byte");
    return bytes_[pos_];
  }

  std::uint16_t u16(const char* what) {
    require(2, what);
    std::uint16_t v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    require(4, what);
    std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) | (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                      (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
    pos_ += 4;
    return v;
  }

  // Variable-length quantity, at most four bytes.
  std::uint32_t vlq(const char* what) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      std::uint8_t b = u8(what);
      value = (value << 7) | (b & 0x7F);
      if ((b & 0x80) == 0) return value;
    }
    throw ParseError(ErrorCode::MalformedHeader, offset(), std::string("variable-length quantity too long in ") + what);
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    require(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void skip(std::size_t n, const char* what) { take(n, what); }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t base_ = 0;
  std::size_t pos_ = 0;
};

inline Track parse_track(std::span<const std::uint8_t> body, std::size_t base_offset) {
  ByteReader in(body, base_offset);
  Track events;
  std::uint64_t tick = 0;
  std::uint8_t running_status = 0;

  while (!in.at_end()) {
    tick += in.vlq("delta time");
    std::uint8_t status = in.peek();
    if (status & 0x80) {
      in.u8();
    } else if (running_status != 0) {
      status = running_status;
    } else {
      throw ParseError(ErrorCode::MalformedHeader, in.offset(), "data byte without running status");
    }

    if (status == 0xFF) {
      running_status = 0;
      std::uint8_t type = in.u8("meta type");
      std::uint32_t len = in.vlq("meta length");
      auto data = in.take(len, "meta data");
      RawMidiEvent ev;
      ev.tick = tick;
      if (type == 0x2F) break;
      if (type == 0x51 && len == 3) {
        ev.kind = EventKind::TempoChange;
        ev.tempo_us_per_quarter = (std::uint32_t{data[0]} << 16) | (std::uint32_t{data[1]} << 8) | data[2];
        if (ev.tempo_us_per_quarter == 0) continue;  // invalid tempo, ignored
      } else if (type == 0x03) {
        ev.kind = EventKind::TrackName;
        ev.text.assign(data.begin(), data.end());
      } else {
        ev.kind = EventKind::OtherMeta;
      }
      events.push_back(std::move(ev));
    } else if (status == 0xF0 || status == 0xF7) {
      running_status = 0;
      std::uint32_t len = in.vlq("sysex length");
      in.skip(len, "sysex data");
    } else if (status >= 0xF1) {
      // System common/real-time messages do not belong in files; skip
      // their data bytes conservatively.
      running_status = 0;
      static constexpr std::uint8_t kDataBytes[16] = {0, 1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
      in.skip(kDataBytes[status & 0x0F], "system message");
    } else {
      running_status = status;
      std::uint8_t type = status & 0xF0;
      if (type == 0xC0 || type == 0xD0) {
        in.u8("channel data");
        continue;
      }
      std::uint8_t d1 = in.u8("channel data") & 0x7F;
      std::uint8_t d2 = in.u8("channel data") & 0x7F;
      if (type == 0x90 || type == 0x80) {
        RawMidiEvent ev;
        ev.tick = tick;
        ev.pitch = d1;
        ev.velocity = d2;
        ev.kind = (type == 0x90 && d2 > 0) ? EventKind::NoteOn : EventKind::NoteOff;
        if (ev.kind == EventKind::NoteOff && type == 0x90) ev.velocity = 0;
        events.push_back(std::move(ev));
      }
    }
  }
  return events;
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

}  // namespace detail

inline void put_vlq(std::vector<std::uint8_t>& out, std::uint32_t value) {
  std::uint8_t buf[5];
  int n = 0;
  buf[n++] = value & 0x7F;
  while (value >>= 7) buf[n++] = static_cast<std::uint8_t>((value & 0x7F) | 0x80);
  while (n > 0) out.push_back(buf[--n]);
}

/// Parses a Standard MIDI File. Delta times are accumulated to absolute
/// ticks, note-on with velocity 0 becomes note-off, and events the curation
/// pipeline has no use for (controllers, sysex, unknown chunks) are skipped.
inline SmfFile parse_smf(std::span<const std::uint8_t> bytes) {
  detail::ByteReader in(bytes);
  if (bytes.size() < 4 || !(bytes[0] == 'M' && bytes[1] == 'T' && bytes[2] == 'h' && bytes[3] == 'd')) {
    throw ParseError(ErrorCode::MalformedHeader, 0, "missing MThd header chunk");
  }
  in.skip(4, "header magic");
  std::uint32_t header_len = in.u32("header length");
  if (header_len < 6) throw ParseError(ErrorCode::MalformedHeader, 4, "header length below 6");
  if (in.remaining() < header_len) throw ParseError(ErrorCode::TruncatedFile, 8, "header chunk extends past end");

  SmfFile file;
  file.format = in.u16("format");
  std::uint16_t declared_tracks = in.u16("track count");
  std::uint16_t division = in.u16("division");
  in.skip(header_len - 6, "header padding");

  if (file.format > 1) throw ParseError(ErrorCode::UnsupportedFormat, 8, "MIDI format " + std::to_string(file.format));
  if (division & 0x8000) throw ParseError(ErrorCode::UnsupportedFormat, 12, "SMPTE time division");
  if (division == 0) throw ParseError(ErrorCode::MalformedHeader, 12, "zero ticks per quarter");
  file.ticks_per_quarter = division;

  while (!in.at_end()) {
    std::size_t chunk_offset = in.offset();
    if (in.remaining() < 8) throw ParseError(ErrorCode::TruncatedFile, chunk_offset, "incomplete chunk header");
    auto magic = in.take(4, "chunk magic");
    std::uint32_t len = in.u32("chunk length");
    if (in.remaining() < len) {
      throw ParseError(ErrorCode::TruncatedFile, chunk_offset, "chunk of " + std::to_string(len) + " bytes extends past end");
    }
    auto body = in.take(len, "chunk body");
    if (magic[0] == 'M' && magic[1] == 'T' && magic[2] == 'r' && magic[3] == 'k') {
      file.tracks.push_back(detail::parse_track(body, chunk_offset + 8));
    }
  }
  (void)declared_tracks;  // trailing/missing tracks are tolerated
  return file;
}

/// Serializes tracks back into a format-1 (or format-0 for a single track)
/// file. Events must be sorted by tick within each track.
inline std::vector<std::uint8_t> write_smf(const SmfFile& file) {
  std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd'};
  detail::put_u32(out, 6);
  detail::put_u16(out, file.format);
  detail::put_u16(out, static_cast<std::uint16_t>(file.tracks.size()));
  detail::put_u16(out, static_cast<std::uint16_t>(file.ticks_per_quarter));

  for (const auto& track : file.tracks) {
    std::vector<std::uint8_t> body;
    std::uint64_t last = 0;
    for (const auto& ev : track) {
      put_vlq(body, static_cast<std::uint32_t>(ev.tick - last));
      last = ev.tick;
      switch (ev.kind) {
        case EventKind::NoteOn:
          body.insert(body.end(), {0x99, ev.pitch, ev.velocity});
          break;
        case EventKind::NoteOff:
          body.insert(body.end(), {0x89, ev.pitch, ev.velocity});
          break;
        case EventKind::TempoChange: {
          std::uint32_t t = ev.tempo_us_per_quarter;
          body.insert(body.end(), {0xFF, 0x51, 0x03, static_cast<std::uint8_t>(t >> 16),
                                   static_cast<std::uint8_t>(t >> 8), static_cast<std::uint8_t>(t)});
          break;
        }
        case EventKind::TrackName:
          body.insert(body.end(), {0xFF, 0x03});
          put_vlq(body, static_cast<std::uint32_t>(ev.text.size()));
          body.insert(body.end(), ev.text.begin(), ev.text.end());
          break;
        case EventKind::OtherMeta:
          body.insert(body.end(), {0xFF, 0x01, 0x00});
          break;
      }
    }
    body.insert(body.end(), {0x00, 0xFF, 0x2F, 0x00});
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    detail::put_u32(out, static_cast<std::uint32_t>(body.size()));
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

}  // namespace adtof::midi
