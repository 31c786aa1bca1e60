#pragma once

#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <variant>
#include <vector>

#include "bgptopo/text_format.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

using MrtRecord = std::variant<UpdateRecord, SnapshotEntry>;

struct MrtStats {
  std::uint64_t records = 0;  // MRT records decoded
  std::uint64_t skipped = 0;  // unknown types + records skipped on error
};

/// Pull parser for MRT archives. Yields update messages (BGP4MP and
/// BGP4MP_ET, 16- and 32-bit AS) as UpdateRecord — withdrawals of a
/// message before its announcements — and RIB dumps (TABLE_DUMP v1
/// IPv4, TABLE_DUMP_V2 IPv4-unicast) as SnapshotEntry stamped with the
/// route's originated time. Unknown record types are counted and
/// skipped. Truncated or malformed records raise ParseError carrying
/// the file offset of the offending record; with OnError::Skip the
/// record is counted and skipped instead, except that a header
/// declaring more bytes than the file holds always ends the stream.
class MrtReader {
 public:
  explicit MrtReader(std::istream& in, OnError on_error = OnError::Abort)
      : in_(in), on_error_(on_error) {}

  std::optional<MrtRecord> next();  // nullopt at end of stream

  const MrtStats& stats() const { return stats_; }

 private:
  bool refill();

  std::istream& in_;
  OnError on_error_;
  MrtStats stats_;
  std::deque<MrtRecord> queue_;
  std::vector<std::pair<AsNum, IpAddress>> peer_table_;
  std::uint64_t offset_ = 0;  // bytes consumed so far
  bool eof_ = false;
};

/// Writes MRT records the reader round-trips: updates as
/// BGP4MP_MESSAGE_AS4 (one per record, with mandatory ORIGIN, AS_PATH,
/// NEXT_HOP attributes), snapshots as TABLE_DUMP_V2 (peer index table,
/// then one IPv4-unicast RIB record per prefix).
class MrtWriter {
 public:
  explicit MrtWriter(std::ostream& out) : out_(out) {}

  void write_update(const UpdateRecord& rec);
  void write_snapshot(std::span<const SnapshotEntry> entries,
                      Timestamp dump_ts);

 private:
  std::ostream& out_;
};

}  // namespace bgptopo
