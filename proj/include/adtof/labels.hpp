#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace adtof {

/// Pads of the rhythm-game controller lane.
enum class GameplayLabel {
  OrangeDrum,
  RedDrum,
  YellowDrum,
  BlueDrum,
  GreenDrum,
  YellowCymbal,
  BlueCymbal,
  GreenCymbal,
};

/// Finer-grained labels used to animate the in-game drummer.
enum class AnimationLabel {
  BassDrum,
  SnareDrum,
  RackTom1,
  RackTom2,
  FloorTom,
  HiHatOpen,
  HiHatClose,
  Crash1,
  Crash2,
  RideCymbal,
};

/// The five output classes.
enum class AdtofClass { BD, SD, TT, HH, CY_RD };

enum class PadColor { Yellow, Blue, Green };

inline constexpr std::array kAllGameplayLabels = {
    GameplayLabel::OrangeDrum,   GameplayLabel::RedDrum,    GameplayLabel::YellowDrum,
    GameplayLabel::BlueDrum,     GameplayLabel::GreenDrum,  GameplayLabel::YellowCymbal,
    GameplayLabel::BlueCymbal,   GameplayLabel::GreenCymbal,
};

inline constexpr std::array kAllAnimationLabels = {
    AnimationLabel::BassDrum,  AnimationLabel::SnareDrum,  AnimationLabel::RackTom1, AnimationLabel::RackTom2,
    AnimationLabel::FloorTom,  AnimationLabel::HiHatOpen,  AnimationLabel::HiHatClose, AnimationLabel::Crash1,
    AnimationLabel::Crash2,    AnimationLabel::RideCymbal,
};

inline constexpr std::array kAllClasses = {AdtofClass::BD, AdtofClass::SD, AdtofClass::TT, AdtofClass::HH,
                                           AdtofClass::CY_RD};
inline constexpr std::size_t kNumClasses = kAllClasses.size();

inline constexpr std::size_t class_index(AdtofClass c) { return static_cast<std::size_t>(c); }

inline std::string_view class_name(AdtofClass c) {
  switch (c) {
    case AdtofClass::BD: return "BD";
    case AdtofClass::SD: return "SD";
    case AdtofClass::TT: return "TT";
    case AdtofClass::HH: return "HH";
    case AdtofClass::CY_RD: return "CY+RD";
  }
  return "?";
}

inline std::optional<AdtofClass> parse_class(std::string_view name) {
  for (auto c : kAllClasses) {
    if (class_name(c) == name) return c;
  }
  return std::nullopt;
}

inline std::string_view gameplay_name(GameplayLabel l) {
  switch (l) {
    case GameplayLabel::OrangeDrum: return "OrangeDrum";
    case GameplayLabel::RedDrum: return "RedDrum";
    case GameplayLabel::YellowDrum: return "YellowDrum";
    case GameplayLabel::BlueDrum: return "BlueDrum";
    case GameplayLabel::GreenDrum: return "GreenDrum";
    case GameplayLabel::YellowCymbal: return "YellowCymbal";
    case GameplayLabel::BlueCymbal: return "BlueCymbal";
    case GameplayLabel::GreenCymbal: return "GreenCymbal";
  }
  return "?";
}

inline std::string_view animation_name(AnimationLabel l) {
  switch (l) {
    case AnimationLabel::BassDrum: return "BassDrum";
    case AnimationLabel::SnareDrum: return "SnareDrum";
    case AnimationLabel::RackTom1: return "RackTom1";
    case AnimationLabel::RackTom2: return "RackTom2";
    case AnimationLabel::FloorTom: return "FloorTom";
    case AnimationLabel::HiHatOpen: return "HiHatOpen";
    case AnimationLabel::HiHatClose: return "HiHatClose";
    case AnimationLabel::Crash1: return "Crash1";
    case AnimationLabel::Crash2: return "Crash2";
    case AnimationLabel::RideCymbal: return "RideCymbal";
  }
  return "?";
}

inline std::string_view pad_name(PadColor p) {
  switch (p) {
    case PadColor::Yellow: return "Yellow";
    case PadColor::Blue: return "Blue";
    case PadColor::Green: return "Green";
  }
  return "?";
}

inline std::optional<GameplayLabel> parse_gameplay(std::string_view name) {
  for (auto l : kAllGameplayLabels) {
    if (gameplay_name(l) == name) return l;
  }
  return std::nullopt;
}

inline std::optional<AnimationLabel> parse_animation(std::string_view name) {
  for (auto l : kAllAnimationLabels) {
    if (animation_name(l) == name) return l;
  }
  return std::nullopt;
}

inline std::optional<PadColor> parse_pad(std::string_view name) {
  for (auto p : {PadColor::Yellow, PadColor::Blue, PadColor::Green}) {
    if (pad_name(p) == name) return p;
  }
  return std::nullopt;
}

/// Cymbal label for a pad, and the drum (tom) label it becomes under a tom marker.
inline GameplayLabel pad_cymbal(PadColor p) {
  switch (p) {
    case PadColor::Yellow: return GameplayLabel::YellowCymbal;
    case PadColor::Blue: return GameplayLabel::BlueCymbal;
    case PadColor::Green: return GameplayLabel::GreenCymbal;
  }
  return GameplayLabel::YellowCymbal;
}

inline GameplayLabel pad_drum(PadColor p) {
  switch (p) {
    case PadColor::Yellow: return GameplayLabel::YellowDrum;
    case PadColor::Blue: return GameplayLabel::BlueDrum;
    case PadColor::Green: return GameplayLabel::GreenDrum;
  }
  return GameplayLabel::YellowDrum;
}

inline std::optional<PadColor> cymbal_pad(GameplayLabel l) {
  switch (l) {
    case GameplayLabel::YellowCymbal: return PadColor::Yellow;
    case GameplayLabel::BlueCymbal: return PadColor::Blue;
    case GameplayLabel::GreenCymbal: return PadColor::Green;
    default: return std::nullopt;
  }
}

}  // namespace adtof
