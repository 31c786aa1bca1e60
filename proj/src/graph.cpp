#include "bgptopo/graph.hpp"

#include <algorithm>
#include <charconv>
#include <string>

namespace bgptopo {

AsGraph::AsGraph(const std::map<Link, Timestamp>& first_seen) {
  for (const auto& [link, ts] : first_seen) add_edge(link, ts);
}

void AsGraph::add_edge(const Link& link, Timestamp first_seen) {
  if (link.lo == link.hi) throw Error("self-loop AS-link");
  if (link.lo > link.hi) throw Error("AS-link not canonical");
  auto [it, inserted] = edges_.try_emplace(link, first_seen);
  if (!inserted) {
    if (first_seen < it->second) it->second = first_seen;
    return;
  }
  nodes_.insert(link.lo);
  nodes_.insert(link.hi);
}

std::set<Link> AsGraph::edge_set() const {
  std::set<Link> out;
  for (const auto& [link, ts] : edges_) out.insert(link);
  return out;
}

std::map<AsNum, std::size_t> AsGraph::degrees() const {
  std::map<AsNum, std::size_t> out;
  for (const auto& [link, ts] : edges_) {
    ++out[link.lo];
    ++out[link.hi];
  }
  return out;
}

AsGraph build_graph(const std::map<Link, Timestamp>& first_seen) {
  return AsGraph(first_seen);
}

GraphDiff diff(const AsGraph& a, const AsGraph& b) {
  GraphDiff out;
  for (const auto& [link, ts] : a.edges()) {
    if (b.has_edge(link))
      out.both.push_back(link);
    else
      out.only_a.push_back(link);
  }
  for (const auto& [link, ts] : b.edges())
    if (!a.has_edge(link)) out.only_b.push_back(link);
  return out;
}

std::vector<std::pair<Timestamp, std::size_t>> cumulative_links(
    const AsGraph& g, std::span<const Timestamp> sample_times) {
  std::vector<Timestamp> seen;
  seen.reserve(g.edge_count());
  for (const auto& [link, ts] : g.edges()) seen.push_back(ts);
  std::sort(seen.begin(), seen.end());

  std::vector<std::pair<Timestamp, std::size_t>> out;
  out.reserve(sample_times.size());
  for (const Timestamp t : sample_times) {
    const auto it = std::upper_bound(seen.begin(), seen.end(), t);
    out.emplace_back(t, static_cast<std::size_t>(it - seen.begin()));
  }
  return out;
}

void write_edge_list(std::ostream& out, const AsGraph& g) {
  for (const auto& [link, ts] : g.edges())
    out << link.lo << ' ' << link.hi << ' ' << ts << '\n';
}

AsGraph read_edge_list(std::istream& in) {
  AsGraph g;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    Link link;
    Timestamp ts = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    const auto field = [&](auto& value, bool last) {
      auto [q, ec] = std::from_chars(p, end, value);
      if (ec != std::errc{} || (last ? q != end : (q == end || *q != ' ')))
        throw ParseError("malformed edge-list line", line_no);
      p = last ? q : q + 1;
    };
    field(link.lo, false);
    field(link.hi, false);
    field(ts, true);
    g.add_edge(link, ts);
  }
  return g;
}

}  // namespace bgptopo
