#pragma once

// Ranking screen: the lowest-scoring fraction of kept tracks is flagged for
// manual review, or discarded on request.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/manifest.hpp"
#include "adtof/text.hpp"

namespace adtof {

/// `track_id<TAB>score` lines.
inline std::map<std::string, double> parse_scores(std::string_view content) {
  std::map<std::string, double> scores;
  int line_no = 0;
  for (auto line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto tab = line.find('\t');
    auto v = tab == std::string_view::npos ? std::nullopt : text::parse_double(line.substr(tab + 1));
    if (!v) throw Error(ErrorCode::Io, "scores line " + std::to_string(line_no) + ": expected id<TAB>score");
    scores[std::string(text::trim(line.substr(0, tab)))] = *v;
  }
  return scores;
}

struct ScoreFilterResult {
  std::vector<std::string> flagged;
  std::vector<std::string> unknown_ids;  // in the scores file but not in the records
};

/// Among kept tracks that have a score, the k = ceil(fraction * n) lowest
/// are flagged; every track tied with the k-th lowest score is flagged too.
/// With `discard_flagged` the flagged tracks are also discarded as
/// label-screen.
inline ScoreFilterResult score_filter(std::vector<TrackRecord>& records, const std::map<std::string, double>& scores,
                                      double fraction = 0.10, bool discard_flagged = false) {
  if (fraction < 0.0 || fraction > 1.0) throw Error(ErrorCode::InvalidArgument, "fraction must be in [0, 1]");
  ScoreFilterResult result;
  std::map<std::string, TrackRecord*> by_id;
  for (auto& r : records) by_id[r.id] = &r;
  for (const auto& [id, score] : scores) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      result.unknown_ids.push_back(id);
      continue;
    }
    it->second->score = score;
  }

  std::vector<TrackRecord*> ranked;
  for (auto& r : records) {
    if (r.kept() && r.score) ranked.push_back(&r);
  }
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ranked.size()) - 1e-9));
  if (k == 0) return result;
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) { return *a->score < *b->score; });
  const double cutoff = *ranked[k - 1]->score;
  for (auto* r : ranked) {
    if (*r->score > cutoff) break;
    r->flagged = true;
    result.flagged.push_back(r->id);
    if (discard_flagged) r->discard(DiscardReason::LabelScreen, "lowest-score screen");
  }
  std::sort(result.flagged.begin(), result.flagged.end());
  return result;
}

}  // namespace adtof
