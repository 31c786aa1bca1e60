#include "bgptopo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

namespace bgptopo {
namespace {

constexpr Timestamp kWarmup = 3600;   // quiet time before the first episode
constexpr Timestamp kStride = 120;    // episode spacing; episodes never overlap
constexpr Timestamp kGap = 10;        // spacing of updates inside an episode
constexpr Timestamp kTailSlack = 1000;
constexpr Timestamp kMaxStreamGap = 200;  // under the 240 s inactivity default
constexpr std::size_t kMaxBackupAnnounces = 4;  // episode = 2..5 announcements

// Unbiased uniform draw from [0, n) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t reject_below = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= reject_below) return r % n;
  }
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[bounded(rng, i)]);
}

// Node index -> public ASN, skipping the 16-to-32-bit placeholder.
AsNum asn_of(std::size_t idx) {
  AsNum as = static_cast<AsNum>(idx) + 1;
  if (as >= 23456) ++as;
  return as;
}

using IndexEdge = std::pair<std::size_t, std::size_t>;

IndexEdge index_edge(std::size_t a, std::size_t b) {
  return a < b ? IndexEdge{a, b} : IndexEdge{b, a};
}

// Stub matching: pair shuffled half-edges, re-shuffle rejects
// (self-loops, duplicates) for a bounded number of passes, then drop
// whatever still will not fit.
std::set<IndexEdge> match_stubs(const std::vector<std::size_t>& deg,
                                std::mt19937_64& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < deg.size(); ++i)
    pool.insert(pool.end(), deg[i], i);
  std::set<IndexEdge> edges;
  for (int pass = 0; pass < 200 && pool.size() >= 2; ++pass) {
    fisher_yates(pool, rng);
    std::vector<std::size_t> rejected;
    for (std::size_t i = 0; i + 1 < pool.size(); i += 2) {
      const std::size_t a = pool[i], b = pool[i + 1];
      if (a == b || !edges.insert(index_edge(a, b)).second) {
        rejected.push_back(a);
        rejected.push_back(b);
      }
    }
    pool = std::move(rejected);
  }
  return edges;
}

UpdateRecord announce(Timestamp ts, AsNum peer_as, const IpAddress& peer_ip,
                      const Prefix& prefix, std::vector<AsNum> path) {
  return {ts, peer_as, peer_ip, UpdateKind::Announce, prefix,
          AsPath::sequence(std::move(path))};
}

}  // namespace

void SynthConfig::validate() const {
  if (node_count < 2) throw Error("synth: need at least 2 nodes");
  if (node_count > 60000)
    throw Error("synth: node count too large for the ASN mapping");
  if (!(degree_exponent > 1.0))
    throw Error("synth: degree exponent must exceed 1");
  if (backup_fraction < 0.0)
    throw Error("synth: backup fraction must be non-negative");
  if (duration < 0) throw Error("synth: negative duration");
}

std::vector<std::size_t> powerlaw_degree_sequence(std::size_t n,
                                                  double exponent,
                                                  std::mt19937_64& rng) {
  // floor(U^(-1/(exponent-1))) hits the discrete CCDF k^-(exponent-1)
  // exactly; the n-1 cap only grazes the far tail.
  const double beta = -1.0 / (exponent - 1.0);
  std::vector<std::size_t> deg(n);
  for (auto& d : deg) {
    double u;
    do {
      u = u01(rng);
    } while (u == 0.0);
    const double k = std::floor(std::pow(u, beta));
    d = k >= static_cast<double>(n - 1) ? n - 1
                                        : static_cast<std::size_t>(k);
  }
  const std::size_t sum =
      std::accumulate(deg.begin(), deg.end(), std::size_t{0});
  if (sum % 2 != 0) {
    for (auto& d : deg)
      if (d < n - 1) {
        ++d;
        break;
      }
  }
  return deg;
}

AsGraph configuration_graph(std::size_t n, double exponent,
                            std::mt19937_64& rng) {
  if (n < 2) throw Error("synth: need at least 2 nodes");
  const auto deg = powerlaw_degree_sequence(n, exponent, rng);
  AsGraph g;
  for (const auto& [a, b] : match_stubs(deg, rng))
    g.add_edge(Link::canonical(asn_of(a), asn_of(b)), 0);
  return g;
}

Scenario generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const std::size_t n = cfg.node_count;

  auto deg = powerlaw_degree_sequence(n, cfg.degree_exponent, rng);
  std::set<IndexEdge> edges = match_stubs(deg, rng);

  std::vector<std::vector<std::size_t>> adj(n);
  auto link_nodes = [&](std::size_t a, std::size_t b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (const auto& [a, b] : edges) link_nodes(a, b);

  // Stitch stray components onto the one holding the biggest hub so a
  // single vantage point can see the whole topology.
  std::vector<int> comp(n, -1);
  int comp_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::deque<std::size_t> queue{i};
    comp[i] = comp_count;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t v : adj[u])
        if (comp[v] < 0) {
          comp[v] = comp_count;
          queue.push_back(v);
        }
    }
    ++comp_count;
  }
  std::size_t hub = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (adj[i].size() > adj[hub].size()) hub = i;
  if (comp_count > 1) {
    std::vector<std::size_t> rep(static_cast<std::size_t>(comp_count), n);
    for (std::size_t i = n; i-- > 0;) rep[static_cast<std::size_t>(comp[i])] = i;
    for (int c = 0; c < comp_count; ++c) {
      if (c == comp[hub]) continue;
      edges.insert(index_edge(rep[static_cast<std::size_t>(c)], hub));
      link_nodes(rep[static_cast<std::size_t>(c)], hub);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (adj[i].size() > adj[hub].size()) hub = i;
  }

  // Breadth-first spanning tree from the hub; tree links carry the
  // converged routes, the hub is the stream's vantage peer.
  const std::size_t root = hub;
  for (auto& list : adj) std::sort(list.begin(), list.end());
  std::vector<std::size_t> parent(n, n), depth(n, 0), bfs_order;
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    bfs_order.push_back(u);
    for (std::size_t v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
  }

  std::set<IndexEdge> tree;
  for (std::size_t v = 0; v < n; ++v)
    if (v != root) tree.insert(index_edge(v, parent[v]));

  // Backup pool: non-tree edges, topped up with fresh non-edges if the
  // requested fraction outruns what stub matching produced.
  std::vector<IndexEdge> pool;
  for (const auto& e : edges)
    if (!tree.contains(e)) pool.push_back(e);
  const auto backups =
      static_cast<std::size_t>(std::llround(cfg.backup_fraction *
                                            static_cast<double>(n - 1)));
  if (pool.size() > backups) {
    fisher_yates(pool, rng);
    pool.resize(backups);
  }
  std::uint64_t attempts = 0;
  while (pool.size() < backups) {
    if (++attempts > 1000 * (backups + 1))
      throw Error("synth: backup fraction infeasible for this topology");
    const std::size_t a = bounded(rng, n), b = bounded(rng, n);
    if (a == b) continue;
    const IndexEdge e = index_edge(a, b);
    if (!edges.insert(e).second) continue;
    pool.push_back(e);
  }

  // a is on the tree path root..b (ancestor-or-self)?
  auto is_ancestor = [&](std::size_t a, std::size_t b) {
    while (depth[b] > depth[a]) b = parent[b];
    return a == b;
  };

  // Each backup edge gets one exploration episode: the origin endpoint
  // re-homes its prefix through the other endpoint. Spreading origins
  // evenly bounds any one converged leaf link's downtime.
  std::vector<std::size_t> episode_load(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> plan;  // (origin, via)
  plan.reserve(pool.size());
  for (const auto& [x, y] : pool) {
    const bool x_ok = !is_ancestor(x, y);
    const bool y_ok = !is_ancestor(y, x);
    std::size_t origin;
    if (x_ok && y_ok) {
      if (episode_load[x] != episode_load[y])
        origin = episode_load[x] < episode_load[y] ? x : y;
      else if (depth[x] != depth[y])
        origin = depth[x] > depth[y] ? x : y;
      else
        origin = std::max(x, y);
    } else {
      origin = x_ok ? x : y;
    }
    ++episode_load[origin];
    plan.emplace_back(origin, origin == x ? y : x);
  }

  std::size_t max_load = 0;
  for (std::size_t v : episode_load) max_load = std::max(max_load, v);

  // Window sizing keeps every converged link's downtime under 1/6 of
  // the window (NP >= 0.833) and leaves backup links a long invisible
  // tail (NP well under 0.2). A converged link is down at most
  // (kMaxBackupAnnounces + 1) * kGap per episode homed at its leaf.
  const Timestamp min_duration =
      kWarmup + static_cast<Timestamp>(backups) * kStride + kTailSlack;
  const Timestamp np_duration = 6 * static_cast<Timestamp>(max_load) *
                                static_cast<Timestamp>(kMaxBackupAnnounces + 1) *
                                kGap;
  Timestamp duration = std::max(min_duration, np_duration);
  if (cfg.duration != 0) {
    if (cfg.duration < duration)
      throw Error("synth: duration too short for the episode schedule");
    duration = cfg.duration;
  }

  Scenario sc;
  sc.t_start = cfg.t_start;
  sc.t_end = cfg.t_start + duration;
  sc.peer_as = asn_of(root);
  sc.peer_address = IpAddress::from_string("10.0.0.1");

  // One /24 per non-root node, converged along its tree path.
  std::vector<std::size_t> node_prefix(n, n);  // node -> prefix index
  std::vector<std::size_t> origin_node;
  for (std::size_t v = 0; v < n; ++v) {
    if (v == root) continue;
    const std::size_t j = sc.prefixes.size();
    node_prefix[v] = j;
    origin_node.push_back(v);
    const auto hi = static_cast<std::uint32_t>(j >> 8);
    const auto lo = static_cast<std::uint32_t>(j & 0xff);
    sc.prefixes.push_back(
        Prefix::make(10u << 24 | hi << 16 | lo << 8, 24));
    std::vector<AsNum> path;
    for (std::size_t u = v; u != root; u = parent[u]) path.push_back(asn_of(u));
    std::reverse(path.begin(), path.end());
    sc.converged_paths.push_back(std::move(path));
  }

  for (const auto& e : tree)
    sc.truth_graph.add_edge(Link::canonical(asn_of(e.first), asn_of(e.second)),
                            sc.t_start);
  for (const auto& [link, ts] : sc.truth_graph.edges())
    sc.converged_links.push_back(link);

  std::vector<UpdateRecord> recs;
  for (std::size_t j = 0; j < sc.prefixes.size(); ++j)
    recs.push_back(announce(sc.t_start, sc.peer_as, sc.peer_address,
                            sc.prefixes[j], sc.converged_paths[j]));

  for (std::size_t k = 0; k < plan.size(); ++k) {
    const auto [origin, via] = plan[k];
    const std::size_t j = node_prefix[origin];
    const Timestamp t0 =
        sc.t_start + kWarmup + static_cast<Timestamp>(k) * kStride;
    const std::size_t count = 1 + bounded(rng, kMaxBackupAnnounces);

    SynthEpisode ep;
    ep.prefix_idx = j;
    ep.backup = Link::canonical(asn_of(origin), asn_of(via));
    ep.withdraw_ts = t0;
    ep.backup_count = count;
    ep.first_backup_ts = t0 + kGap;
    ep.reconverge_ts = t0 + static_cast<Timestamp>(count + 1) * kGap;

    std::vector<AsNum> stem;  // tree path to the via node, sans peer
    for (std::size_t u = via; u != root; u = parent[u]) stem.push_back(asn_of(u));
    std::reverse(stem.begin(), stem.end());

    recs.push_back({t0, sc.peer_as, sc.peer_address, UpdateKind::Withdraw,
                    sc.prefixes[j], std::nullopt});
    for (std::size_t i = 1; i <= count; ++i) {
      std::vector<AsNum> path = stem;
      path.insert(path.end(), i + 1, asn_of(origin));  // growing prepend
      recs.push_back(announce(t0 + static_cast<Timestamp>(i) * kGap,
                              sc.peer_as, sc.peer_address, sc.prefixes[j],
                              std::move(path)));
    }
    recs.push_back(announce(ep.reconverge_ts, sc.peer_as, sc.peer_address,
                            sc.prefixes[j], sc.converged_paths[j]));

    sc.truth_graph.add_edge(ep.backup, ep.first_backup_ts);
    sc.backup_links.push_back(ep.backup);
    sc.episode_stems.push_back(std::move(stem));
    sc.episode_origins.push_back(asn_of(origin));
    sc.episodes.push_back(ep);
  }
  std::sort(sc.backup_links.begin(), sc.backup_links.end());

  // Keep-alive padding: idempotent converged re-announcements, round
  // robin over prefixes, never inside the prefix's own episode.
  std::size_t next_prefix = 0;
  auto blocked = [&](std::size_t j, Timestamp ts) {
    for (const auto& ep : sc.episodes)
      if (ep.prefix_idx == j && ep.withdraw_ts <= ts && ts < ep.reconverge_ts)
        return true;
    return false;
  };
  auto pad_at = [&](Timestamp ts, std::vector<UpdateRecord>& out) {
    for (std::size_t tries = 0; tries < sc.prefixes.size(); ++tries) {
      const std::size_t j = next_prefix++ % sc.prefixes.size();
      if (blocked(j, ts)) continue;
      out.push_back(announce(ts, sc.peer_as, sc.peer_address, sc.prefixes[j],
                             sc.converged_paths[j]));
      return;
    }
  };

  if (cfg.event_count > recs.size()) {
    const std::size_t extra = cfg.event_count - recs.size();
    for (std::size_t i = 0; i < extra; ++i)
      pad_at(sc.t_start + static_cast<Timestamp>(i + 1) * duration /
                              static_cast<Timestamp>(extra + 1),
             recs);
  }
  std::stable_sort(recs.begin(), recs.end(),
                   [](const UpdateRecord& a, const UpdateRecord& b) {
                     return a.timestamp < b.timestamp;
                   });

  // Close any remaining silence so default inactivity detection stays
  // quiet on the emitted stream.
  std::vector<UpdateRecord> fill;
  Timestamp prev = sc.t_start;
  for (const auto& r : recs) {
    while (r.timestamp - prev > kMaxStreamGap) {
      prev += kMaxStreamGap;
      pad_at(prev, fill);
    }
    prev = std::max(prev, r.timestamp);
  }
  while (sc.t_end - prev > kMaxStreamGap) {
    prev += kMaxStreamGap;
    pad_at(prev, fill);
  }
  recs.insert(recs.end(), fill.begin(), fill.end());
  std::stable_sort(recs.begin(), recs.end(),
                   [](const UpdateRecord& a, const UpdateRecord& b) {
                     return a.timestamp < b.timestamp;
                   });
  sc.stream = std::move(recs);
  return sc;
}

std::vector<SnapshotEntry> Scenario::snapshot_at(Timestamp t) const {
  if (t < t_start || t > t_end)
    throw Error("snapshot time outside the scenario window");
  std::vector<SnapshotEntry> out;
  for (std::size_t j = 0; j < prefixes.size(); ++j) {
    // Last schedule point for this prefix at or before t wins.
    Timestamp announce_ts = t_start;
    const std::vector<AsNum>* path = &converged_paths[j];
    bool withdrawn = false;
    std::vector<AsNum> backup_path;
    for (std::size_t k = 0; k < episodes.size(); ++k) {
      const SynthEpisode& ep = episodes[k];
      if (ep.prefix_idx != j || ep.withdraw_ts > t) continue;
      if (t < ep.first_backup_ts) {
        withdrawn = true;
      } else if (t < ep.reconverge_ts) {
        const auto i = std::min<Timestamp>(
            (t - ep.withdraw_ts) / kGap,
            static_cast<Timestamp>(ep.backup_count));
        withdrawn = false;
        announce_ts = ep.withdraw_ts + i * kGap;
        backup_path = episode_stems[k];
        backup_path.insert(backup_path.end(),
                           static_cast<std::size_t>(i) + 1,
                           episode_origins[k]);
        path = &backup_path;
      } else {
        withdrawn = false;
        announce_ts = ep.reconverge_ts;
        path = &converged_paths[j];
      }
    }
    if (withdrawn) continue;
    out.push_back({announce_ts, peer_as, peer_address, prefixes[j],
                   AsPath::sequence(*path)});
  }
  return out;
}

void write_manifest_csv(std::ostream& out, const Scenario& s) {
  out << "lo,hi,class,first_seen\n";
  for (const auto& [link, ts] : s.truth_graph.edges()) {
    const bool backup = std::binary_search(s.backup_links.begin(),
                                           s.backup_links.end(), link);
    out << link.lo << ',' << link.hi << ','
        << (backup ? "backup" : "converged") << ',' << ts << '\n';
  }
}

}  // namespace bgptopo
