#pragma once

// Artist-disjoint cross-validation folds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "adtof/error.hpp"
#include "adtof/manifest.hpp"
#include "adtof/text.hpp"

namespace adtof {

/// track id -> fold index.
using SplitAssignment = std::map<std::string, std::size_t>;

/// Groups kept tracks by artist and hands the groups, largest first, to the
/// currently smallest fold (lowest index on ties). Equal-sized groups are
/// ordered by a seeded shuffle.
inline SplitAssignment build_splits(std::span<const TrackRecord> records, std::size_t n_folds = 10, std::uint64_t seed = 0) {
  if (n_folds < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 folds");
  std::map<std::string, std::vector<std::string>> by_artist;
  for (const auto& r : records) {
    if (r.kept()) by_artist[r.artist].push_back(r.id);
  }
  if (by_artist.size() < n_folds) {
    throw Error(ErrorCode::TooFewArtists,
                std::to_string(by_artist.size()) + " distinct artists for " + std::to_string(n_folds) + " folds");
  }

  std::vector<std::vector<std::string>*> groups;
  for (auto& [artist, ids] : by_artist) groups.push_back(&ids);
  std::mt19937_64 rng(seed);
  for (std::size_t i = groups.size(); i > 1; --i) {
    std::swap(groups[i - 1], groups[static_cast<std::size_t>(rng() % i)]);
  }
  std::stable_sort(groups.begin(), groups.end(), [](const auto* a, const auto* b) { return a->size() > b->size(); });

  std::vector<std::size_t> fold_size(n_folds, 0);
  SplitAssignment out;
  for (const auto* g : groups) {
    auto fold = static_cast<std::size_t>(std::min_element(fold_size.begin(), fold_size.end()) - fold_size.begin());
    fold_size[fold] += g->size();
    for (const auto& id : *g) out[id] = fold;
  }
  return out;
}

inline std::size_t fold_count(const SplitAssignment& a) {
  std::size_t n = 0;
  for (const auto& [id, fold] : a) n = std::max(n, fold + 1);
  return n;
}

struct FoldRoles {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
};

/// Test = `test_fold`, validation = the next fold (cyclically), train = rest.
inline FoldRoles fold_roles(const SplitAssignment& assignment, std::size_t test_fold, std::size_t n_folds) {
  if (n_folds < 2 || test_fold >= n_folds) throw Error(ErrorCode::InvalidArgument, "test fold out of range");
  const std::size_t validation_fold = (test_fold + 1) % n_folds;
  FoldRoles roles;
  for (const auto& [id, fold] : assignment) {
    if (fold == test_fold) {
      roles.test.push_back(id);
    } else if (fold == validation_fold) {
      roles.validation.push_back(id);
    } else {
      roles.train.push_back(id);
    }
  }
  return roles;
}

/// Variant for datasets with a fixed small number of splits: the test split
/// is `test_fold` and every other track is randomly partitioned into
/// round(validation_fraction * n) validation tracks and the rest training.
inline FoldRoles holdout_roles(const SplitAssignment& assignment, std::size_t test_fold, std::uint64_t seed,
                               double validation_fraction = 0.15) {
  FoldRoles roles;
  std::vector<std::string> rest;
  for (const auto& [id, fold] : assignment) (fold == test_fold ? roles.test : rest).push_back(id);
  std::mt19937_64 rng(seed);
  for (std::size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[static_cast<std::size_t>(rng() % i)]);
  auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(rest.size())));
  roles.validation.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
  roles.train.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());
  std::sort(roles.validation.begin(), roles.validation.end());
  std::sort(roles.train.begin(), roles.train.end());
  return roles;
}

/// `track_id<TAB>fold` lines sorted by track id.
inline std::string format_splits(const SplitAssignment& a) {
  std::string out;
  for (const auto& [id, fold] : a) out += id + "\t" + std::to_string(fold) + "\n";
  return out;
}

inline SplitAssignment parse_splits(std::string_view content) {
  SplitAssignment a;
  int line_no = 0;
  for (auto line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto tab = line.find('\t');
    auto fold = tab == std::string_view::npos ? std::nullopt : text::parse_int(line.substr(tab + 1));
    if (!fold || *fold < 0) throw Error(ErrorCode::Io, "splits line " + std::to_string(line_no) + ": expected id<TAB>fold");
    a[std::string(line.substr(0, tab))] = static_cast<std::size_t>(*fold);
  }
  return a;
}

}  // namespace adtof
