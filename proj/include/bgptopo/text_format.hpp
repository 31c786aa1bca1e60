#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "bgptopo/types.hpp"

namespace bgptopo {

/// What a reader does with a malformed input unit.
enum class OnError : std::uint8_t { Abort, Skip };

struct TextStats {
  std::uint64_t records = 0;
  std::uint64_t skipped_lines = 0;
};

// One record per line, fields '|'-separated:
//   <unix_ts>|<peer_as>|<peer_ip>|A|<prefix>/<len>|<space-separated path>
//   <unix_ts>|<peer_as>|<peer_ip>|W|<prefix>/<len>
// AS-set segments in the path are written {a,b,c}. Snapshot lines drop
// the A/W column (always a route).

UpdateRecord parse_update_line(std::string_view line, std::uint64_t line_no = 0);
SnapshotEntry parse_snapshot_line(std::string_view line, std::uint64_t line_no = 0);

std::string format_update(const UpdateRecord& rec);
std::string format_snapshot(const SnapshotEntry& entry);

std::string format_as_path(const AsPath& path);
AsPath parse_as_path(std::string_view text);  // throws Error

/// Streams UpdateRecords out of the canonical text format.
class TextUpdateReader {
 public:
  explicit TextUpdateReader(std::istream& in, OnError on_error = OnError::Abort)
      : in_(in), on_error_(on_error) {}

  /// Next record, or nullopt at end of input. Throws ParseError on a
  /// malformed line under OnError::Abort; skips and counts otherwise.
  std::optional<UpdateRecord> next();

  const TextStats& stats() const { return stats_; }

 private:
  std::istream& in_;
  OnError on_error_;
  TextStats stats_;
  std::uint64_t line_no_ = 0;
  std::string line_;
};

/// Streams SnapshotEntries out of the BTD text format.
class TextSnapshotReader {
 public:
  explicit TextSnapshotReader(std::istream& in, OnError on_error = OnError::Abort)
      : in_(in), on_error_(on_error) {}

  std::optional<SnapshotEntry> next();

  const TextStats& stats() const { return stats_; }

 private:
  std::istream& in_;
  OnError on_error_;
  TextStats stats_;
  std::uint64_t line_no_ = 0;
  std::string line_;
};

void write_update(std::ostream& out, const UpdateRecord& rec);
void write_snapshot(std::ostream& out, const SnapshotEntry& entry);

}  // namespace bgptopo
