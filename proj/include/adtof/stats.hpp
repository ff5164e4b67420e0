#pragma once

#include <cstdio>
#include <map>
#include <span>
#include <string>

#include "adtof/labels.hpp"
#include "adtof/manifest.hpp"
#include "adtof/text.hpp"
#include "adtof/vocabulary.hpp"

namespace adtof {

struct DatasetStats {
  std::size_t kept = 0;
  std::size_t discarded = 0;
  std::size_t flagged = 0;
  std::map<std::string, std::size_t> discarded_by_reason;
  double hours = 0.0;
  std::map<std::string, std::size_t> genre_counts;  // kept tracks with a genre
  ClassMultiset class_counts{};
};

inline DatasetStats compute_stats(std::span<const TrackRecord> records) {
  DatasetStats s;
  double seconds = 0.0;
  for (const auto& r : records) {
    if (r.flagged) ++s.flagged;
    if (!r.kept()) {
      ++s.discarded;
      ++s.discarded_by_reason[std::string(discard_reason_name(r.discard_reason))];
      continue;
    }
    ++s.kept;
    seconds += r.duration;
    if (!r.genre.empty()) ++s.genre_counts[r.genre];
    for (std::size_t k = 0; k < kNumClasses; ++k) s.class_counts[k] += r.n_onsets_per_class[k];
  }
  s.hours = seconds / 3600.0;
  return s;
}

/// `section<TAB>key<TAB>value` rows.
inline std::string format_stats(const DatasetStats& s) {
  std::string out = "section\tkey\tvalue\n";
  auto row = [&out](std::string_view section, std::string_view key, const std::string& value) {
    out.append(section).append("\t").append(key).append("\t").append(value).append("\n");
  };
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s.hours);
  row("total", "hours", buf);
  row("total", "kept", std::to_string(s.kept));
  row("total", "discarded", std::to_string(s.discarded));
  row("total", "flagged", std::to_string(s.flagged));
  for (const auto& [reason, n] : s.discarded_by_reason) row("discarded", reason, std::to_string(n));
  for (auto c : kAllClasses) row("class", class_name(c), std::to_string(s.class_counts[class_index(c)]));
  for (const auto& [genre, n] : s.genre_counts) row("genre", genre, std::to_string(n));
  return out;
}

}  // namespace adtof
