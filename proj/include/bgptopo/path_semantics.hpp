#pragma once

#include <cstdint>
#include <vector>

#include "bgptopo/types.hpp"

namespace bgptopo {

/// What to do with paths that contain AS-set segments.
///  Run: the set breaks adjacency; links are extracted per run.
///  DropPath: the whole path yields no links.
enum class AsSetPolicy : std::uint8_t { Run, DropPath };

struct PathOptions {
  AsSetPolicy set_policy = AsSetPolicy::Run;
};

/// Private-use and reserved AS numbers (16- and 32-bit ranges).
bool is_private_or_reserved(AsNum asn);

/// Hop list partitioned into runs. AS-sets and removed private AS
/// numbers break the list; no link bridges a break.
struct NormalizedPath {
  std::vector<std::vector<AsNum>> runs;

  std::vector<AsNum> hops() const;  // runs flattened, for inspection
  bool operator==(const NormalizedPath&) const = default;
};

/// Prepends the peer AS, collapses consecutive duplicates, removes
/// private/reserved AS numbers, and breaks the path at AS-sets and at
/// every removed AS number.
NormalizedPath normalize(const AsPath& path, AsNum peer_as,
                         const PathOptions& opts = {});

/// Adjacent-hop links per run, canonicalized, in path order.
/// Duplicates within one path are retained.
std::vector<Link> extract_links(const NormalizedPath& path);

/// normalize + extract + in-order dedup: the link set one route
/// contributes to the RIB.
std::vector<Link> route_links(const AsPath& path, AsNum peer_as,
                              const PathOptions& opts = {});

}  // namespace bgptopo
