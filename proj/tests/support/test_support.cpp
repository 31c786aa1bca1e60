#include "test_support.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <tuple>

namespace testsup {

using bgptopo::AsNum;
using bgptopo::AsPath;
using bgptopo::Interval;
using bgptopo::IpAddress;
using bgptopo::Link;
using bgptopo::Prefix;
using bgptopo::Timestamp;
using bgptopo::UpdateKind;
using bgptopo::UpdateRecord;
using bgptopo::VisibilityTimeline;

std::int64_t utc_seconds(int year, int month, int day, int hour, int minute,
                         int second) {
  // Days-from-civil, valid for all Gregorian dates.
  std::int64_t y = year;
  y -= month <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy =
      (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days = era * 146097 + doe - 719468;
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

UpdateRecord announce(Timestamp ts, AsNum peer_as, const std::string& peer_ip,
                      const std::string& prefix, std::vector<AsNum> path) {
  UpdateRecord rec;
  rec.timestamp = ts;
  rec.peer_as = peer_as;
  rec.peer_address = IpAddress::from_string(peer_ip);
  rec.kind = UpdateKind::Announce;
  rec.prefix = Prefix::from_string(prefix);
  rec.path = AsPath::sequence(std::move(path));
  return rec;
}

UpdateRecord withdraw(Timestamp ts, AsNum peer_as, const std::string& peer_ip,
                      const std::string& prefix) {
  UpdateRecord rec;
  rec.timestamp = ts;
  rec.peer_as = peer_as;
  rec.peer_address = IpAddress::from_string(peer_ip);
  rec.kind = UpdateKind::Withdraw;
  rec.prefix = Prefix::from_string(prefix);
  return rec;
}

namespace {

// Links of one route, derived directly here: prepend the peer,
// collapse consecutive duplicates, pair up adjacent hops.
std::set<Link> oracle_route_links(const UpdateRecord& rec) {
  std::vector<AsNum> hops{rec.peer_as};
  for (const auto& seg : rec.path->segments)
    for (AsNum asn : seg.asns)
      if (hops.back() != asn) hops.push_back(asn);
  std::set<Link> links;
  for (std::size_t i = 1; i < hops.size(); ++i)
    links.insert(Link::canonical(hops[i - 1], hops[i]));
  return links;
}

}  // namespace

std::map<Link, VisibilityTimeline> naive_timelines(
    const std::vector<UpdateRecord>& records, Timestamp t_end) {
  using RouteKey = std::tuple<AsNum, IpAddress, Prefix>;
  std::map<RouteKey, std::set<Link>> routes;

  struct Track {
    VisibilityTimeline timeline;
    std::optional<Timestamp> open;
  };
  std::map<Link, Track> tracks;
  std::set<Link> visible;
  Timestamp clock = 0;
  bool clock_set = false;

  for (const auto& rec : records) {
    clock = clock_set ? std::max(clock, rec.timestamp) : rec.timestamp;
    clock_set = true;

    const RouteKey key{rec.peer_as, rec.peer_address, rec.prefix};
    if (rec.kind == UpdateKind::Withdraw) {
      routes.erase(key);
    } else {
      routes[key] = oracle_route_links(rec);
    }

    // Full rescan: the visible set is the union over all routes.
    std::set<Link> now;
    for (const auto& [k, links] : routes) now.insert(links.begin(), links.end());

    for (const Link& l : visible) {
      if (now.contains(l)) continue;
      Track& t = tracks.at(l);
      t.timeline.intervals.push_back({*t.open, clock});
      t.open.reset();
    }
    for (const Link& l : now) {
      if (visible.contains(l)) continue;
      Track& t = tracks[l];
      if (!t.timeline.intervals.empty() || t.open) {
        t.open = clock;
      } else {
        t.timeline.link = l;
        t.timeline.first_seen = clock;
        t.open = clock;
      }
    }
    if (rec.kind == UpdateKind::Announce)
      for (const Link& l : routes.at(key))
        tracks.at(l).timeline.last_announce = clock;
    visible = std::move(now);
  }

  std::map<Link, VisibilityTimeline> out;
  for (auto& [link, t] : tracks) {
    if (t.open) {
      t.timeline.intervals.push_back({*t.open, t_end});
      t.open.reset();
    }
    t.timeline.last_visible = t.timeline.intervals.empty()
                                  ? t.timeline.first_seen
                                  : t.timeline.intervals.back().end;
    out.emplace(link, std::move(t.timeline));
  }
  return out;
}

namespace {

struct BfsTables {
  std::map<AsNum, int> dist;
  std::map<AsNum, double> sigma;
};

BfsTables bfs_from(AsNum src, const std::map<AsNum, std::vector<AsNum>>& adj) {
  BfsTables t;
  t.dist[src] = 0;
  t.sigma[src] = 1.0;
  std::vector<AsNum> frontier{src};
  int d = 0;
  while (!frontier.empty()) {
    std::vector<AsNum> next;
    for (AsNum u : frontier) {
      for (AsNum v : adj.at(u)) {
        auto it = t.dist.find(v);
        if (it == t.dist.end()) {
          t.dist[v] = d + 1;
          t.sigma[v] = t.sigma[u];
          next.push_back(v);
        } else if (it->second == d + 1) {
          t.sigma[v] += t.sigma[u];
        }
      }
    }
    // A node can be discovered by several frontier members; dedup so
    // sigma is not multiplied by revisits.
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    frontier = std::move(next);
    ++d;
  }
  return t;
}

std::map<AsNum, std::vector<AsNum>> adjacency(const std::set<Link>& edges) {
  std::map<AsNum, std::vector<AsNum>> adj;
  for (const Link& e : edges) {
    adj[e.lo].push_back(e.hi);
    adj[e.hi].push_back(e.lo);
  }
  return adj;
}

}  // namespace

std::map<Link, double> brute_betweenness(const std::set<Link>& edges) {
  const auto adj = adjacency(edges);
  std::map<AsNum, BfsTables> tables;
  for (const auto& [node, nbrs] : adj) tables.emplace(node, bfs_from(node, adj));

  std::map<Link, double> score;
  for (const Link& e : edges) score[e] = 0.0;

  std::vector<AsNum> nodes;
  for (const auto& [node, nbrs] : adj) nodes.push_back(node);

  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const BfsTables& ta = tables.at(nodes[a]);
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const auto dit = ta.dist.find(nodes[b]);
      if (dit == ta.dist.end()) continue;  // different components
      const int d = dit->second;
      const double sigma = ta.sigma.at(nodes[b]);
      const BfsTables& tb = tables.at(nodes[b]);
      for (const Link& e : edges) {
        const auto du = ta.dist.find(e.lo);
        const auto dv = ta.dist.find(e.hi);
        if (du == ta.dist.end() || dv == ta.dist.end()) continue;
        double through = 0.0;
        if (du->second + 1 + tb.dist.at(e.hi) == d)
          through += ta.sigma.at(e.lo) * tb.sigma.at(e.hi);
        if (dv->second + 1 + tb.dist.at(e.lo) == d)
          through += ta.sigma.at(e.hi) * tb.sigma.at(e.lo);
        if (through > 0.0) score[e] += through / sigma;
      }
    }
  }
  return score;
}

double distance_sum(const std::set<Link>& edges) {
  const auto adj = adjacency(edges);
  std::vector<AsNum> nodes;
  for (const auto& [node, nbrs] : adj) nodes.push_back(node);
  double sum = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    const BfsTables t = bfs_from(nodes[a], adj);
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const auto it = t.dist.find(nodes[b]);
      if (it != t.dist.end()) sum += it->second;
    }
  }
  return sum;
}

std::vector<UpdateRecord> random_stream(std::uint64_t seed,
                                        const StreamShape& shape) {
  std::mt19937_64 rng(seed);
  const auto pick = [&rng](int n) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  };

  std::vector<UpdateRecord> out;
  out.reserve(shape.records);
  Timestamp ts = 1'000'000'000;
  for (std::size_t i = 0; i < shape.records; ++i) {
    ts += pick(4);
    const Timestamp emit =
        pick(100) < shape.backstep_pct ? ts - 1 - pick(5) : ts;

    const int peer = pick(shape.peers);
    const AsNum peer_as = 100 + static_cast<AsNum>(peer);
    const std::string peer_ip = "10.0.0." + std::to_string(peer + 1);
    const std::string prefix =
        "10.1." + std::to_string(pick(shape.prefixes)) + ".0/24";

    if (pick(100) < shape.withdraw_pct) {
      out.push_back(withdraw(emit, peer_as, peer_ip, prefix));
      continue;
    }
    const int len = 1 + pick(shape.max_path);
    std::vector<AsNum> path;
    for (int h = 0; h < len; ++h) {
      const AsNum asn = 100 + static_cast<AsNum>(pick(shape.asn_pool));
      path.push_back(asn);
      if (pick(100) < 10) path.push_back(asn);  // prepending
    }
    out.push_back(announce(emit, peer_as, peer_ip, prefix, std::move(path)));
  }
  return out;
}

std::set<Link> random_connected_graph(std::uint64_t seed, int n,
                                      int extra_edges) {
  std::mt19937_64 rng(seed);
  const auto pick = [&rng](int k) {
    return static_cast<int>(rng() % static_cast<std::uint64_t>(k));
  };
  std::set<Link> edges;
  for (int i = 2; i <= n; ++i)
    edges.insert(Link::canonical(static_cast<AsNum>(i),
                                 static_cast<AsNum>(1 + pick(i - 1))));
  for (int tries = 0; tries < extra_edges * 20 && extra_edges > 0; ++tries) {
    const AsNum a = static_cast<AsNum>(1 + pick(n));
    const AsNum b = static_cast<AsNum>(1 + pick(n));
    if (a == b) continue;
    if (edges.insert(Link::canonical(a, b)).second && --extra_edges == 0) break;
  }
  return edges;
}

}  // namespace testsup
