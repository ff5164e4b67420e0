#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "adtof/error.hpp"
#include "adtof/labels.hpp"
#include "adtof/text.hpp"

namespace adtof {

/// MIDI pitch assignments for one chart lane. Loaded from a line-based file:
///
///   [gameplay]     pitch=GameplayLabel   (cymbal pitches for Yellow/Blue/Green pads)
///   [tom_markers]  pitch=Yellow|Blue|Green
///   [animation]    pitch=AnimationLabel
///   [tracks]       drums=<track name>, beat=<track name>
struct PitchMapConfig {
  std::map<std::uint8_t, GameplayLabel> gameplay;
  std::map<std::uint8_t, PadColor> tom_markers;
  std::map<std::uint8_t, AnimationLabel> animation;
  std::string drum_track = "PART DRUMS";
  std::string beat_track = "BEAT";

  friend bool operator==(const PitchMapConfig&, const PitchMapConfig&) = default;
};

// Expert lane and drummer animation notes as laid out in the community
// charting documentation. Pitch 25 (hi-hat pedal state) and the choke notes
// are not hits and stay unmapped.
inline constexpr std::string_view kDefaultPitchMap = R"([gameplay]
96=OrangeDrum
97=RedDrum
98=YellowCymbal
99=BlueCymbal
100=GreenCymbal

[tom_markers]
110=Yellow
111=Blue
112=Green

[animation]
24=BassDrum
26=SnareDrum
27=SnareDrum
28=SnareDrum
29=SnareDrum
30=HiHatClose
31=HiHatClose
34=Crash1
35=Crash1
36=Crash1
37=Crash1
38=Crash2
39=Crash2
42=RideCymbal
43=RideCymbal
44=Crash2
45=Crash2
46=RackTom1
47=RackTom1
48=RackTom2
49=RackTom2
50=FloorTom
51=FloorTom

[tracks]
drums=PART DRUMS
beat=BEAT
)";

inline PitchMapConfig parse_pitch_map(std::string_view content) {
  PitchMapConfig cfg;
  cfg.gameplay.clear();
  std::string section;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::BadPitchMap, "line " + std::to_string(line_no) + ": " + msg);
  };
  for (auto line : text::split_lines(content)) {
    ++line_no;
    line = text::trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = text::lower(text::trim(line.substr(1, line.size() - 2)));
      if (section != "gameplay" && section != "tom_markers" && section != "animation" && section != "tracks") {
        fail("unknown section [" + section + "]");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected key=value");
    auto key = text::trim(line.substr(0, eq));
    auto value = text::trim(line.substr(eq + 1));
    if (section == "tracks") {
      std::string k = text::lower(key);
      if (k == "drums") {
        cfg.drum_track = std::string(value);
      } else if (k == "beat") {
        cfg.beat_track = std::string(value);
      } else {
        fail("unknown track key " + std::string(key));
      }
      continue;
    }
    auto pitch = text::parse_int(key);
    if (!pitch || *pitch < 0 || *pitch > 127) fail("pitch must be an integer in 0..127");
    auto p = static_cast<std::uint8_t>(*pitch);
    if (section == "gameplay") {
      auto label = parse_gameplay(value);
      if (!label) fail("unknown gameplay label " + std::string(value));
      cfg.gameplay[p] = *label;
    } else if (section == "tom_markers") {
      auto pad = parse_pad(value);
      if (!pad) fail("unknown pad color " + std::string(value));
      cfg.tom_markers[p] = *pad;
    } else if (section == "animation") {
      auto label = parse_animation(value);
      if (!label) fail("unknown animation label " + std::string(value));
      cfg.animation[p] = *label;
    } else {
      fail("entry outside of a section");
    }
  }
  return cfg;
}

inline PitchMapConfig default_pitch_map() { return parse_pitch_map(kDefaultPitchMap); }

}  // namespace adtof
