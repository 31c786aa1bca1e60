#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <set>

#include "bgptopo/replay.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

/// Reading of "the last time a link was seen" for the lifetime span:
/// the end of the last visibility interval (default), or the last
/// announcing update that carried the link.
enum class NlMode : std::uint8_t { VisibleEnd, LastAnnounce };

struct TemporalStats {
  Link link;
  Timestamp first_seen = 0;
  double np = 0.0;  // cumulative visible time / (t_end - first_seen)
  double nl = 0.0;  // lifetime span / (t_end - first_seen)
};

/// Per-link persistence and lifetime ratios. If first_seen == t_end
/// the window is empty and both ratios are 1.
TemporalStats compute_stats(const VisibilityTimeline& timeline, Timestamp t_end,
                            NlMode mode = NlMode::VisibleEnd);

/// NP bucket decomposition against a snapshot-derived subgraph:
/// rows NP <= 0.2, 0.2 < NP < 0.8, NP >= 0.8; columns in/not in it.
struct BucketTable {
  static constexpr std::size_t kBuckets = 3;
  std::array<std::uint64_t, kBuckets> in_btd{};
  std::array<std::uint64_t, kBuckets> not_in_btd{};

  std::array<double, kBuckets> in_btd_pct() const;
  std::array<double, kBuckets> not_in_btd_pct() const;
};

BucketTable bucket_np(std::span<const TemporalStats> stats,
                      const std::set<Link>& btd_links);

// CSV emitters.
void write_temporal_csv(std::ostream& out,
                        std::span<const TemporalStats> stats);
void write_bucket_csv(std::ostream& out, const BucketTable& table);

}  // namespace bgptopo
