#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "bgptopo/types.hpp"

namespace bgptopo {

/// Accumulated AS-link set with per-link first-observation timestamps.
/// Nodes are exactly the union of edge endpoints.
class AsGraph {
 public:
  AsGraph() = default;
  explicit AsGraph(const std::map<Link, Timestamp>& first_seen);

  /// Keeps the earliest timestamp on duplicates. Self-loops rejected.
  void add_edge(const Link& link, Timestamp first_seen);

  bool has_edge(const Link& link) const { return edges_.contains(link); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t node_count() const { return nodes_.size(); }
  const std::map<Link, Timestamp>& edges() const { return edges_; }
  const std::set<AsNum>& nodes() const { return nodes_; }
  std::set<Link> edge_set() const;

  std::map<AsNum, std::size_t> degrees() const;

 private:
  std::map<Link, Timestamp> edges_;
  std::set<AsNum> nodes_;
};

AsGraph build_graph(const std::map<Link, Timestamp>& first_seen);

struct GraphDiff {
  std::vector<Link> only_a;
  std::vector<Link> only_b;
  std::vector<Link> both;
};

GraphDiff diff(const AsGraph& a, const AsGraph& b);

/// |{e : first_seen(e) <= t}| at each sample time; non-decreasing.
std::vector<std::pair<Timestamp, std::size_t>> cumulative_links(
    const AsGraph& g, std::span<const Timestamp> sample_times);

// Edge-list file: "<lo> <hi> <first_seen>" per line, sorted by (lo, hi).
void write_edge_list(std::ostream& out, const AsGraph& g);
AsGraph read_edge_list(std::istream& in);

}  // namespace bgptopo
