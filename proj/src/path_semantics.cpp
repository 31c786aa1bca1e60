#include "bgptopo/path_semantics.hpp"

#include <algorithm>

namespace bgptopo {

bool is_private_or_reserved(AsNum asn) {
  if (asn == 0 || asn == 23456) return true;            // reserved, AS_TRANS
  if (asn >= 64512 && asn <= 65535) return true;        // 16-bit private
  if (asn >= 4200000000u) return true;                  // 32-bit private + last
  return false;
}

std::vector<AsNum> NormalizedPath::hops() const {
  std::vector<AsNum> out;
  for (const auto& run : runs) out.insert(out.end(), run.begin(), run.end());
  return out;
}

NormalizedPath normalize(const AsPath& path, AsNum peer_as,
                         const PathOptions& opts) {
  NormalizedPath out;
  if (opts.set_policy == AsSetPolicy::DropPath) {
    for (const auto& seg : path.segments)
      if (seg.kind == PathSegment::Kind::Set) return out;
  }

  std::vector<AsNum> run;
  const auto flush_run = [&] {
    if (!run.empty()) out.runs.push_back(std::move(run));
    run.clear();
  };
  const auto add_hop = [&](AsNum asn) {
    if (is_private_or_reserved(asn)) {
      flush_run();
      return;
    }
    if (run.empty() || run.back() != asn) run.push_back(asn);
  };

  add_hop(peer_as);
  for (const auto& seg : path.segments) {
    if (seg.kind == PathSegment::Kind::Set) {
      flush_run();
      continue;
    }
    for (const AsNum asn : seg.asns) add_hop(asn);
  }
  flush_run();
  return out;
}

std::vector<Link> extract_links(const NormalizedPath& path) {
  std::vector<Link> out;
  for (const auto& run : path.runs)
    for (std::size_t i = 1; i < run.size(); ++i)
      out.push_back(Link::canonical(run[i - 1], run[i]));
  return out;
}

std::vector<Link> route_links(const AsPath& path, AsNum peer_as,
                              const PathOptions& opts) {
  std::vector<Link> links = extract_links(normalize(path, peer_as, opts));
  std::vector<Link> out;
  out.reserve(links.size());
  for (const Link& link : links)
    if (std::find(out.begin(), out.end(), link) == out.end())
      out.push_back(link);
  return out;
}

}  // namespace bgptopo
