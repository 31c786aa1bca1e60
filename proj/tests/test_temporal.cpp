#include "bgptopo/temporal.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "bgptopo/replay.hpp"
#include "bgptopo/types.hpp"

using namespace bgptopo;

namespace {

VisibilityTimeline timeline(Link link, std::vector<Interval> intervals,
                            Timestamp last_announce = 0) {
  VisibilityTimeline tl;
  tl.link = link;
  tl.intervals = std::move(intervals);
  tl.first_seen = tl.intervals.front().start;
  tl.last_visible = tl.intervals.back().end;
  tl.last_announce = last_announce;
  return tl;
}

}  // namespace

TEST(Temporal, AlwaysVisibleScoresOne) {
  const auto stats = compute_stats(timeline({1, 2}, {{0, 40}}), 40);
  EXPECT_DOUBLE_EQ(stats.np, 1.0);
  EXPECT_DOUBLE_EQ(stats.nl, 1.0);
}

TEST(Temporal, InterruptedVisibilitySplitsPersistenceAndLifetime) {
  const auto stats = compute_stats(timeline({1, 2}, {{0, 10}, {20, 30}}), 40);
  EXPECT_DOUBLE_EQ(stats.np, 0.5);   // 20 visible seconds over a 40 s window
  EXPECT_DOUBLE_EQ(stats.nl, 0.75);  // last seen at 30
  EXPECT_EQ(stats.first_seen, 0);
}

TEST(Temporal, ZeroLengthAppearanceScoresZero) {
  const auto stats = compute_stats(timeline({1, 2}, {{30, 30}}), 40);
  EXPECT_DOUBLE_EQ(stats.np, 0.0);
  EXPECT_DOUBLE_EQ(stats.nl, 0.0);
}

TEST(Temporal, BoundaryOnlyLinkUsesDegenerateRule) {
  const auto stats = compute_stats(timeline({1, 2}, {{40, 40}}), 40);
  EXPECT_DOUBLE_EQ(stats.np, 1.0);
  EXPECT_DOUBLE_EQ(stats.nl, 1.0);
}

TEST(Temporal, PersistenceNeverExceedsLifetime) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Interval> intervals;
    Timestamp at = static_cast<Timestamp>(rng() % 50);
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      const Timestamp start = at;
      const Timestamp end = start + static_cast<Timestamp>(rng() % 20);
      intervals.push_back({start, end});
      at = end + 1 + static_cast<Timestamp>(rng() % 20);
    }
    const Timestamp t_end =
        intervals.back().end + static_cast<Timestamp>(rng() % 30);
    const auto stats = compute_stats(timeline({1, 2}, intervals), t_end);
    EXPECT_LE(stats.np, stats.nl + 1e-12);
    EXPECT_GE(stats.np, 0.0);
    EXPECT_LE(stats.nl, 1.0);
  }
}

TEST(Temporal, RatiosInvariantUnderTimeScaling) {
  const std::vector<Interval> base{{10, 30}, {50, 70}};
  const auto plain = compute_stats(timeline({1, 2}, base), 100);
  std::vector<Interval> scaled;
  for (const auto& iv : base) scaled.push_back({iv.start * 7, iv.end * 7});
  const auto stretched = compute_stats(timeline({1, 2}, scaled), 700);
  EXPECT_DOUBLE_EQ(plain.np, stretched.np);
  EXPECT_DOUBLE_EQ(plain.nl, stretched.nl);
}

TEST(Temporal, LifetimeModeCanUseLastAnnounceInstead) {
  const auto tl = timeline({1, 2}, {{0, 10}, {20, 30}}, 25);
  const auto by_visible = compute_stats(tl, 40, NlMode::VisibleEnd);
  const auto by_announce = compute_stats(tl, 40, NlMode::LastAnnounce);
  EXPECT_DOUBLE_EQ(by_visible.nl, 0.75);
  EXPECT_DOUBLE_EQ(by_announce.nl, 0.625);  // (25 - 0) / 40
  EXPECT_DOUBLE_EQ(by_visible.np, by_announce.np);
}

TEST(Temporal, BucketsSplitOnPersistenceAndMembership) {
  std::vector<TemporalStats> stats;
  std::set<Link> btd;

  // 70 steady links inside the snapshot graph, 30 short-lived outside.
  for (AsNum i = 0; i < 70; ++i) {
    const Link link{1000 + i, 2000 + i};
    btd.insert(link);
    stats.push_back(compute_stats(timeline(link, {{0, 1000}}), 1000));
  }
  for (AsNum i = 0; i < 30; ++i) {
    const Link link{3000 + i, 4000 + i};
    stats.push_back(compute_stats(timeline(link, {{0, 150}}), 1000));
  }

  const auto table = bucket_np(stats, btd);
  EXPECT_EQ(table.in_btd[0], 0u);
  EXPECT_EQ(table.in_btd[1], 0u);
  EXPECT_EQ(table.in_btd[2], 70u);
  EXPECT_EQ(table.not_in_btd[0], 30u);
  EXPECT_EQ(table.not_in_btd[1], 0u);
  EXPECT_EQ(table.not_in_btd[2], 0u);

  const auto pct = table.in_btd_pct();
  EXPECT_DOUBLE_EQ(pct[2], 100.0);
  EXPECT_DOUBLE_EQ(table.not_in_btd_pct()[0], 100.0);
}

TEST(Temporal, BucketBoundariesAreInclusive) {
  std::vector<TemporalStats> stats;
  stats.push_back(compute_stats(timeline({1, 2}, {{0, 20}}), 100));   // 0.2
  stats.push_back(compute_stats(timeline({1, 3}, {{0, 80}}), 100));   // 0.8
  stats.push_back(compute_stats(timeline({1, 4}, {{0, 50}}), 100));   // middle

  const auto table = bucket_np(stats, {});
  EXPECT_EQ(table.not_in_btd[0], 1u);  // np <= 0.2
  EXPECT_EQ(table.not_in_btd[1], 1u);  // 0.2 < np < 0.8
  EXPECT_EQ(table.not_in_btd[2], 1u);  // np >= 0.8
}

TEST(Temporal, CsvEmittersAreStable) {
  std::vector<TemporalStats> stats{
      compute_stats(timeline({1, 2}, {{0, 10}, {20, 30}}), 40)};
  std::ostringstream temporal;
  write_temporal_csv(temporal, stats);
  EXPECT_EQ(temporal.str(), "lo,hi,first_seen,np,nl\n1,2,0,0.5,0.75\n");

  std::ostringstream buckets;
  write_bucket_csv(buckets, bucket_np(stats, {}));
  EXPECT_NE(buckets.str().find("np<=0.2"), std::string::npos);
}
