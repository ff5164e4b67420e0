#pragma once

// Reduction of gameplay/animation labels to the five output classes, and
// resolution of gameplay encodings (flams, accents) against the animation
// lane.

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adtof/labels.hpp"
#include "adtof/timing.hpp"

namespace adtof {

inline constexpr AdtofClass map_gameplay(GameplayLabel label) {
  switch (label) {
    case GameplayLabel::OrangeDrum: return AdtofClass::BD;
    case GameplayLabel::RedDrum: return AdtofClass::SD;
    case GameplayLabel::YellowDrum:
    case GameplayLabel::BlueDrum:
    case GameplayLabel::GreenDrum: return AdtofClass::TT;
    case GameplayLabel::YellowCymbal: return AdtofClass::HH;
    case GameplayLabel::BlueCymbal:
    case GameplayLabel::GreenCymbal: return AdtofClass::CY_RD;
  }
  return AdtofClass::BD;
}

inline constexpr AdtofClass map_animation(AnimationLabel label) {
  switch (label) {
    case AnimationLabel::BassDrum: return AdtofClass::BD;
    case AnimationLabel::SnareDrum: return AdtofClass::SD;
    case AnimationLabel::RackTom1:
    case AnimationLabel::RackTom2:
    case AnimationLabel::FloorTom: return AdtofClass::TT;
    case AnimationLabel::HiHatOpen:
    case AnimationLabel::HiHatClose: return AdtofClass::HH;
    case AnimationLabel::Crash1:
    case AnimationLabel::Crash2:
    case AnimationLabel::RideCymbal: return AdtofClass::CY_RD;
  }
  return AdtofClass::BD;
}

/// Gameplay label that maps back onto a class.
inline constexpr GameplayLabel canonical_gameplay(AdtofClass c) {
  switch (c) {
    case AdtofClass::BD: return GameplayLabel::OrangeDrum;
    case AdtofClass::SD: return GameplayLabel::RedDrum;
    case AdtofClass::TT: return GameplayLabel::YellowDrum;
    case AdtofClass::HH: return GameplayLabel::YellowCymbal;
    case AdtofClass::CY_RD: return GameplayLabel::BlueCymbal;
  }
  return GameplayLabel::OrangeDrum;
}

template <typename Label>
struct TimedEvent {
  double time = 0.0;
  Label label{};

  friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
};

enum class Provenance { Gameplay, AnimationResolved };

struct LabeledOnset {
  double time = 0.0;
  AdtofClass cls = AdtofClass::BD;
  Provenance provenance = Provenance::Gameplay;

  friend bool operator==(const LabeledOnset&, const LabeledOnset&) = default;
};

using ClassMultiset = std::array<std::size_t, kNumClasses>;

struct Discrepancy {
  double time = 0.0;
  std::vector<AdtofClass> gameplay;
  std::vector<AdtofClass> animation;
  std::string action;
};

struct ResolvedTrack {
  std::vector<LabeledOnset> onsets;
  std::vector<Discrepancy> discrepancies;
};

namespace detail {

inline std::vector<AdtofClass> expand(const ClassMultiset& m) {
  std::vector<AdtofClass> out;
  for (auto c : kAllClasses) out.insert(out.end(), m[class_index(c)], c);
  return out;
}

// Appends (time, cls) unless already present among onsets added since `from`.
inline void push_unique(std::vector<LabeledOnset>& out, std::size_t from, LabeledOnset onset) {
  for (std::size_t k = from; k < out.size(); ++k) {
    if (out[k].time == onset.time && out[k].cls == onset.cls) return;
  }
  out.push_back(onset);
}

inline bool onset_less(const LabeledOnset& a, const LabeledOnset& b) {
  return a.time < b.time || (a.time == b.time && class_index(a.cls) < class_index(b.cls));
}

}  // namespace detail

/// Maps a track to the five classes. Without animation every gameplay event
/// is mapped directly. With animation, events from both lanes are grouped
/// into chords (all events within `chord_window` of the chord's first event);
/// a chord whose gameplay class multiset differs from its animation class
/// multiset is replaced entirely by the animation classes, emitted at the
/// chord's first gameplay time (or first animation time if it has no
/// gameplay). Duplicate (time, class) pairs in a chord are merged.
inline ResolvedTrack resolve_track(std::span<const TimedEvent<GameplayLabel>> gameplay,
                                   std::span<const TimedEvent<AnimationLabel>> animation, double chord_window = 0.010) {
  ResolvedTrack result;
  auto& out = result.onsets;

  if (animation.empty()) {
    std::size_t chord_start = 0;
    for (std::size_t i = 0; i < gameplay.size(); ++i) {
      if (i == 0 || gameplay[i].time != gameplay[i - 1].time) chord_start = out.size();
      detail::push_unique(out, chord_start, {gameplay[i].time, map_gameplay(gameplay[i].label), Provenance::Gameplay});
    }
    std::stable_sort(out.begin(), out.end(), detail::onset_less);
    return result;
  }

  std::size_t gi = 0, ai = 0;
  while (gi < gameplay.size() || ai < animation.size()) {
    double start;
    if (ai >= animation.size() || (gi < gameplay.size() && gameplay[gi].time <= animation[ai].time)) {
      start = gameplay[gi].time;
    } else {
      start = animation[ai].time;
    }
    const double limit = start + chord_window + kTimeEpsilon;

    std::size_t g_begin = gi, a_begin = ai;
    while (gi < gameplay.size() && gameplay[gi].time <= limit) ++gi;
    while (ai < animation.size() && animation[ai].time <= limit) ++ai;

    ClassMultiset g_classes{}, a_classes{};
    for (std::size_t k = g_begin; k < gi; ++k) ++g_classes[class_index(map_gameplay(gameplay[k].label))];
    for (std::size_t k = a_begin; k < ai; ++k) ++a_classes[class_index(map_animation(animation[k].label))];

    const std::size_t chord_out = out.size();
    if (g_classes == a_classes) {
      for (std::size_t k = g_begin; k < gi; ++k) {
        detail::push_unique(out, chord_out, {gameplay[k].time, map_gameplay(gameplay[k].label), Provenance::Gameplay});
      }
    } else {
      double t = g_begin < gi ? gameplay[g_begin].time : animation[a_begin].time;
      for (auto c : detail::expand(a_classes)) detail::push_unique(out, chord_out, {t, c, Provenance::AnimationResolved});
      result.discrepancies.push_back({t, detail::expand(g_classes), detail::expand(a_classes), "animation-adopted"});
    }
  }
  std::stable_sort(out.begin(), out.end(), detail::onset_less);
  return result;
}

inline ClassMultiset class_histogram(std::span<const LabeledOnset> onsets) {
  ClassMultiset counts{};
  for (const auto& o : onsets) ++counts[class_index(o.cls)];
  return counts;
}

}  // namespace adtof
