#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bgptopo/types.hpp"

namespace bgptopo {

struct LinkEvent {
  enum class Dir : std::uint8_t { Up, Down };
  Timestamp timestamp = 0;
  Link link;
  Dir dir = Dir::Up;

  bool operator==(const LinkEvent&) const = default;
};

struct RibStats {
  std::uint64_t applied = 0;
  std::uint64_t withdraw_noops = 0;
  std::uint64_t clamped_timestamps = 0;
  std::uint64_t flushes = 0;
};

/// Replayed routing-table state: one route entry per
/// (peer AS, peer address, prefix), plus per-link reference counts.
/// A link is visible while its refcount is at least one.
class RibState {
 public:
  struct RouteKey {
    AsNum peer_as = 0;
    IpAddress peer_address;
    Prefix prefix;
    auto operator<=>(const RouteKey&) const = default;
  };

  /// Applies one update whose link list has been precomputed (deduped,
  /// in path order). An announce replaces the route entry; a withdraw
  /// removes it. Emits Up on refcount 0->1 and Down on 1->0, downs
  /// before ups. Timestamps earlier than the clock are clamped.
  std::vector<LinkEvent> apply(const UpdateRecord& rec,
                               std::span<const Link> links);

  /// Removes every route of the peer; Down events for links whose
  /// refcount reaches zero. Unknown peer is a no-op.
  std::vector<LinkEvent> flush_peer(AsNum peer_as, const IpAddress& address,
                                    Timestamp t);

  Timestamp clock() const { return clock_; }
  const RibStats& stats() const { return stats_; }
  std::size_t route_count() const { return routes_.size(); }
  std::uint64_t refcount(const Link& link) const;

  /// Links of every current route for one peer (used by snapshots and
  /// consistency checks).
  const std::map<RouteKey, std::vector<Link>>& routes() const {
    return routes_;
  }

  /// Recomputes refcounts from the routes map and compares with the
  /// maintained map. Test/debug hook.
  bool check_refcounts() const;

 private:
  void bump(const Link& link, int delta, Timestamp t,
            std::vector<LinkEvent>& events);

  std::map<RouteKey, std::vector<Link>> routes_;
  std::map<Link, std::uint64_t> refcounts_;
  Timestamp clock_ = 0;
  bool clock_set_ = false;
  RibStats stats_;
};

}  // namespace bgptopo
