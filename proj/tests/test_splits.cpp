#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "adtof/splits.hpp"

using namespace adtof;

namespace {

std::vector<TrackRecord> tracks(const std::vector<std::string>& artists) {
  std::vector<TrackRecord> out;
  for (std::size_t i = 0; i < artists.size(); ++i) {
    TrackRecord r;
    r.id = "track" + std::to_string(1000 + i);
    r.artist = artists[i];
    r.duration = 100;
    out.push_back(r);
  }
  return out;
}

// Checks artist disjointness and the size-spread bound; returns the spread.
void expect_sound(const std::vector<TrackRecord>& recs, const SplitAssignment& a, std::size_t n_folds) {
  std::map<std::string, std::set<std::size_t>> folds_of_artist;
  std::map<std::string, std::size_t> group;
  std::vector<std::size_t> size(n_folds, 0);
  std::size_t kept = 0;
  for (const auto& r : recs) {
    if (!r.kept()) {
      ASSERT_FALSE(a.count(r.id));
      continue;
    }
    ++kept;
    ASSERT_TRUE(a.count(r.id));
    ASSERT_LT(a.at(r.id), n_folds);
    folds_of_artist[r.artist].insert(a.at(r.id));
    ++group[r.artist];
    ++size[a.at(r.id)];
  }
  ASSERT_EQ(a.size(), kept);
  std::size_t largest = 0;
  for (const auto& [artist, folds] : folds_of_artist) ASSERT_EQ(folds.size(), 1u) << artist;
  for (const auto& [artist, n] : group) largest = std::max(largest, n);
  auto [lo, hi] = std::minmax_element(size.begin(), size.end());
  ASSERT_LE(*hi - *lo, largest);
}

}  // namespace

TEST(Splits, OneTrackPerFold) {
  std::vector<std::string> artists;
  for (int k = 0; k < 10; ++k) artists.push_back("artist" + std::to_string(k));
  auto recs = tracks(artists);
  auto a = build_splits(recs, 10, 1);
  std::set<std::size_t> used;
  for (auto& [id, f] : a) used.insert(f);
  EXPECT_EQ(used.size(), 10u);
}

TEST(Splits, SameArtistSameFold) {
  std::vector<std::string> artists = {"x", "x"};
  for (int k = 0; k < 9; ++k) artists.push_back("a" + std::to_string(k));
  auto recs = tracks(artists);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto a = build_splits(recs, 10, seed);
    EXPECT_EQ(a.at(recs[0].id), a.at(recs[1].id));
  }
}

TEST(Splits, TooFewArtistsAndBadFoldCount) {
  auto recs = tracks({"a", "b", "c"});
  try {
    build_splits(recs, 10, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewArtists);
  }
  EXPECT_THROW(build_splits(recs, 1, 0), Error);
}

TEST(Splits, DiscardedTracksExcluded) {
  std::vector<std::string> artists;
  for (int k = 0; k < 12; ++k) artists.push_back("a" + std::to_string(k));
  auto recs = tracks(artists);
  recs[3].discard(DiscardReason::Empty, "x");
  auto a = build_splits(recs, 10, 0);
  expect_sound(recs, a, 10);
}

TEST(Splits, BalancedOverRandomArtists) {
  std::mt19937_64 rng(30);
  std::vector<std::string> artists;
  for (int k = 0; k < 100; ++k) artists.push_back("a" + std::to_string(rng() % 30));
  auto recs = tracks(artists);
  for (std::uint64_t seed = 0; seed < 20; ++seed) expect_sound(recs, build_splits(recs, 10, seed), 10);
}

TEST(Splits, DeterministicForSeed) {
  std::mt19937_64 rng(1);
  std::vector<std::string> artists;
  for (int k = 0; k < 80; ++k) artists.push_back("a" + std::to_string(rng() % 25));
  auto recs = tracks(artists);
  EXPECT_EQ(format_splits(build_splits(recs, 10, 5)), format_splits(build_splits(recs, 10, 5)));
  auto a = build_splits(recs, 10, 5);
  EXPECT_EQ(parse_splits(format_splits(a)), a);
}

TEST(FoldRoles, RotationAndPartition) {
  std::vector<std::string> artists;
  for (int k = 0; k < 40; ++k) artists.push_back("a" + std::to_string(k));
  auto recs = tracks(artists);
  auto a = build_splits(recs, 10, 3);
  auto roles = fold_roles(a, 9, 10);
  for (auto& id : roles.validation) EXPECT_EQ(a.at(id), 0u);
  for (auto& id : roles.test) EXPECT_EQ(a.at(id), 9u);
  for (auto& id : roles.train) {
    EXPECT_GE(a.at(id), 1u);
    EXPECT_LE(a.at(id), 8u);
  }
  std::set<std::string> all(roles.train.begin(), roles.train.end());
  all.insert(roles.validation.begin(), roles.validation.end());
  all.insert(roles.test.begin(), roles.test.end());
  EXPECT_EQ(all.size(), recs.size());
  EXPECT_EQ(roles.train.size() + roles.validation.size() + roles.test.size(), recs.size());
  EXPECT_THROW(fold_roles(a, 10, 10), Error);
}

TEST(FoldRoles, HoldoutFifteenEightyFive) {
  SplitAssignment a;
  for (int k = 0; k < 100; ++k) a["rest" + std::to_string(k)] = 1 + k % 2;
  for (int k = 0; k < 30; ++k) a["test" + std::to_string(k)] = 0;
  auto roles = holdout_roles(a, 0, 7);
  EXPECT_EQ(roles.test.size(), 30u);
  EXPECT_EQ(roles.validation.size(), 15u);
  EXPECT_EQ(roles.train.size(), 85u);
  auto again = holdout_roles(a, 0, 7);
  EXPECT_EQ(again.validation, roles.validation);
  SplitAssignment small;
  for (int k = 0; k < 7; ++k) small["r" + std::to_string(k)] = 1;
  EXPECT_EQ(holdout_roles(small, 0, 1).validation.size(), 1u);  // round(1.05)
}
