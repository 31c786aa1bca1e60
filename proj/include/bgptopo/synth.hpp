#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

#include "bgptopo/graph.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

/// Scenario shape knobs. Defaults give a ~100-link topology whose
/// stream stays quiet enough that reset detection at default
/// thresholds fires nothing.
struct SynthConfig {
  std::size_t node_count = 101;
  double degree_exponent = 2.1;   // CCDF target: deg^-(exponent-1)
  double backup_fraction = 0.0;   // backup links per spanning-tree link
  std::size_t event_count = 0;    // stream-size floor (0 = minimum)
  std::uint64_t seed = 1;
  Timestamp t_start = 1'060'000'000;
  Timestamp duration = 0;         // seconds; 0 = sized from the schedule

  void validate() const;  // throws Error
};

/// One path-exploration episode: a withdraw, `backup_count` longer
/// backup announcements with growing origin prepending, then the
/// converged path again.
struct SynthEpisode {
  std::size_t prefix_idx = 0;
  Link backup;
  Timestamp withdraw_ts = 0;
  std::size_t backup_count = 0;  // announcements before reconvergence
  Timestamp first_backup_ts = 0;
  Timestamp reconverge_ts = 0;
};

/// A generated topology plus the update stream that discovers it.
/// truth_graph's first_seen carries the expected discovery time of
/// every link; converged and backup links partition the truth edges.
struct Scenario {
  AsGraph truth_graph;
  std::vector<Link> converged_links;  // spanning-tree links, sorted
  std::vector<Link> backup_links;     // episode-only links, sorted
  std::vector<UpdateRecord> stream;
  Timestamp t_start = 0;
  Timestamp t_end = 0;

  // Schedule internals snapshot_at() replays without touching the rib.
  AsNum peer_as = 0;
  IpAddress peer_address;
  std::vector<Prefix> prefixes;                     // one per non-root node
  std::vector<std::vector<AsNum>> converged_paths;  // stored form, sans peer
  std::vector<std::vector<AsNum>> episode_stems;    // per episode: path to w
  std::vector<AsNum> episode_origins;               // per episode: origin AS
  std::vector<SynthEpisode> episodes;               // ordered by withdraw_ts

  /// The routes a collector dump at time t would hold, derived from
  /// the generator's own schedule. t must lie in [t_start, t_end].
  std::vector<SnapshotEntry> snapshot_at(Timestamp t) const;
};

Scenario generate(const SynthConfig& cfg);

/// Degree sequence with P(deg >= k) = k^-(exponent-1), capped at
/// n - 1, sum forced even.
std::vector<std::size_t> powerlaw_degree_sequence(std::size_t n,
                                                  double exponent,
                                                  std::mt19937_64& rng);

/// Simple graph from stub matching on a power-law degree sequence;
/// self-loops and duplicate edges are re-matched, stubborn leftovers
/// dropped. Nodes are ASNs 1..n (23456 skipped).
AsGraph configuration_graph(std::size_t n, double exponent,
                            std::mt19937_64& rng);

// CSV `lo,hi,class,first_seen` with class converged | backup.
void write_manifest_csv(std::ostream& out, const Scenario& s);

}  // namespace bgptopo
