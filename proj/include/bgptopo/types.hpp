#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgptopo {

using AsNum = std::uint32_t;
using Timestamp = std::int64_t;

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A malformed input. `line` is 1-based for text inputs, 0 if unknown;
/// `offset` is the byte offset for binary inputs.
class ParseError : public Error {
 public:
  ParseError(std::string msg, std::uint64_t line, std::uint64_t offset = 0)
      : Error(std::move(msg)), line(line), offset(offset) {}
  std::uint64_t line = 0;
  std::uint64_t offset = 0;
};

/// IPv4 or IPv6 address. IPv4 occupies the first four bytes; the rest
/// stay zero so default comparison is well defined.
struct IpAddress {
  bool is_v4 = true;
  std::array<std::uint8_t, 16> bytes{};

  static IpAddress v4(std::uint32_t host_order);
  static IpAddress from_string(const std::string& text);  // throws Error
  std::uint32_t v4_host_order() const;
  std::string to_string() const;

  auto operator<=>(const IpAddress&) const = default;
};

/// IPv4 prefix. `addr` is in host byte order with host bits zeroed.
struct Prefix {
  std::uint32_t addr = 0;
  std::uint8_t length = 0;

  static Prefix make(std::uint32_t addr_host_order, std::uint8_t length);
  static Prefix from_string(const std::string& text);  // throws Error
  std::string to_string() const;

  auto operator<=>(const Prefix&) const = default;
};

struct PathSegment {
  enum class Kind : std::uint8_t { Sequence, Set };
  Kind kind = Kind::Sequence;
  std::vector<AsNum> asns;

  auto operator<=>(const PathSegment&) const = default;
};

/// An AS-path attribute: ordered segments, each a sequence or a set.
struct AsPath {
  std::vector<PathSegment> segments;

  static AsPath sequence(std::vector<AsNum> asns);
  bool empty() const { return segments.empty(); }

  auto operator<=>(const AsPath&) const = default;
};

enum class UpdateKind : std::uint8_t { Announce, Withdraw };

/// One BGP announcement or withdrawal for a single prefix.
struct UpdateRecord {
  Timestamp timestamp = 0;
  AsNum peer_as = 0;
  IpAddress peer_address;
  UpdateKind kind = UpdateKind::Announce;
  Prefix prefix;
  std::optional<AsPath> path;  // present iff kind == Announce

  bool operator==(const UpdateRecord&) const = default;
};

/// One route from a table snapshot (BTD).
struct SnapshotEntry {
  Timestamp timestamp = 0;
  AsNum peer_as = 0;
  IpAddress peer_address;
  Prefix prefix;
  AsPath path;

  bool operator==(const SnapshotEntry&) const = default;
};

/// An undirected AS-link, canonicalized so that lo < hi.
struct Link {
  AsNum lo = 0;
  AsNum hi = 0;

  static Link canonical(AsNum a, AsNum b) {
    return a < b ? Link{a, b} : Link{b, a};
  }

  auto operator<=>(const Link&) const = default;
};

/// A BGP session endpoint. One AS may run several sessions to the
/// collector, so the address is part of the identity.
struct PeerId {
  AsNum as = 0;
  IpAddress address;

  auto operator<=>(const PeerId&) const = default;
};

}  // namespace bgptopo
