#include "bgptopo/rib.hpp"

#include <algorithm>

namespace bgptopo {

void RibState::bump(const Link& link, int delta, Timestamp t,
                    std::vector<LinkEvent>& events) {
  auto it = refcounts_.try_emplace(link, 0).first;
  if (delta > 0) {
    if (it->second == 0)
      events.push_back({t, link, LinkEvent::Dir::Up});
    it->second += static_cast<std::uint64_t>(delta);
  } else {
    it->second -= static_cast<std::uint64_t>(-delta);
    if (it->second == 0) {
      events.push_back({t, link, LinkEvent::Dir::Down});
      refcounts_.erase(it);
    }
  }
}

std::vector<LinkEvent> RibState::apply(const UpdateRecord& rec,
                                       std::span<const Link> links) {
  Timestamp t = rec.timestamp;
  if (clock_set_ && t < clock_) {
    t = clock_;
    ++stats_.clamped_timestamps;
  }
  clock_ = t;
  clock_set_ = true;
  ++stats_.applied;

  const RouteKey key{rec.peer_as, rec.peer_address, rec.prefix};
  std::vector<LinkEvent> events;

  auto it = routes_.find(key);
  if (rec.kind == UpdateKind::Withdraw) {
    if (it == routes_.end()) {
      ++stats_.withdraw_noops;
      return events;
    }
    for (const Link& link : it->second) bump(link, -1, t, events);
    routes_.erase(it);
    return events;
  }

  // Replacement is a set diff: links carried before and after are
  // untouched, so a kept link never flaps.
  const std::vector<Link> old_links =
      it == routes_.end() ? std::vector<Link>{} : std::move(it->second);
  const auto in = [](const std::vector<Link>& v, const Link& l) {
    return std::find(v.begin(), v.end(), l) != v.end();
  };
  std::vector<Link> new_links(links.begin(), links.end());
  for (const Link& link : old_links)
    if (!in(new_links, link)) bump(link, -1, t, events);
  for (const Link& link : new_links)
    if (!in(old_links, link)) bump(link, +1, t, events);

  if (it == routes_.end())
    routes_.emplace(key, std::move(new_links));
  else
    it->second = std::move(new_links);
  return events;
}

std::vector<LinkEvent> RibState::flush_peer(AsNum peer_as,
                                            const IpAddress& address,
                                            Timestamp t) {
  if (clock_set_ && t < clock_) t = clock_;
  clock_ = t;
  clock_set_ = true;
  ++stats_.flushes;

  std::vector<LinkEvent> events;
  const RouteKey lo{peer_as, address, Prefix{0, 0}};
  auto it = routes_.lower_bound(lo);
  while (it != routes_.end() && it->first.peer_as == peer_as &&
         it->first.peer_address == address) {
    for (const Link& link : it->second) bump(link, -1, t, events);
    it = routes_.erase(it);
  }
  return events;
}

std::uint64_t RibState::refcount(const Link& link) const {
  const auto it = refcounts_.find(link);
  return it == refcounts_.end() ? 0 : it->second;
}

bool RibState::check_refcounts() const {
  std::map<Link, std::uint64_t> recomputed;
  for (const auto& [key, links] : routes_)
    for (const Link& link : links) ++recomputed[link];
  return recomputed == refcounts_;
}

}  // namespace bgptopo
