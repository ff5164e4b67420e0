#pragma once

// Annotation TSV: one `onset_seconds<TAB>class` line per event, onset with
// six decimals, sorted by onset.

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/labels.hpp"
#include "adtof/text.hpp"
#include "adtof/vocabulary.hpp"

namespace adtof {

inline std::string format_annotations(std::span<const LabeledOnset> onsets) {
  std::vector<LabeledOnset> sorted(onsets.begin(), onsets.end());
  std::stable_sort(sorted.begin(), sorted.end(), detail::onset_less);
  std::string out;
  for (const auto& o : sorted) {
    out += text::format_seconds(o.time);
    out += '\t';
    out += class_name(o.cls);
    out += '\n';
  }
  return out;
}

inline std::vector<LabeledOnset> parse_annotations(std::string_view content) {
  std::vector<LabeledOnset> out;
  int line_no = 0;
  for (auto line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto tab = line.find('\t');
    auto fail = [&](const char* what) {
      throw Error(ErrorCode::BadAnnotationFile, "line " + std::to_string(line_no) + ": " + what);
    };
    if (tab == std::string_view::npos) fail("expected onset<TAB>class");
    auto t = text::parse_double(line.substr(0, tab));
    if (!t || *t < 0.0) fail("bad onset time");
    auto cls = parse_class(text::trim(line.substr(tab + 1)));
    if (!cls) fail("unknown class");
    out.push_back({*t, *cls, Provenance::Gameplay});
  }
  std::stable_sort(out.begin(), out.end(), detail::onset_less);
  return out;
}

/// Per-class sorted onset times.
using OnsetsByClass = std::array<std::vector<double>, kNumClasses>;

inline OnsetsByClass split_by_class(std::span<const LabeledOnset> onsets) {
  OnsetsByClass out;
  for (const auto& o : onsets) out[class_index(o.cls)].push_back(o.time);
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

}  // namespace adtof
