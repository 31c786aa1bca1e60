#include "bgptopo/text_format.hpp"

#include <charconv>
#include <vector>

namespace bgptopo {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

template <typename T>
T parse_int(std::string_view s, const char* what, std::uint64_t line_no) {
  T value{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError(std::string("invalid ") + what + ": '" + std::string(s) +
                         "'",
                     line_no);
  return value;
}

}  // namespace

AsPath parse_as_path(std::string_view text) {
  AsPath path;
  std::size_t pos = 0;
  const auto skip_spaces = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip_spaces();
  while (pos < text.size()) {
    if (text[pos] == '{') {
      const auto close = text.find('}', pos);
      if (close == std::string_view::npos)
        throw Error("unterminated AS-set in path");
      PathSegment seg{PathSegment::Kind::Set, {}};
      for (auto part : split(text.substr(pos + 1, close - pos - 1), ','))
        seg.asns.push_back(parse_int<AsNum>(part, "AS number", 0));
      if (seg.asns.empty()) throw Error("empty AS-set in path");
      path.segments.push_back(std::move(seg));
      pos = close + 1;
    } else {
      auto end = text.find_first_of(" {", pos);
      if (end == std::string_view::npos) end = text.size();
      const AsNum asn =
          parse_int<AsNum>(text.substr(pos, end - pos), "AS number", 0);
      if (path.segments.empty() ||
          path.segments.back().kind != PathSegment::Kind::Sequence)
        path.segments.push_back({PathSegment::Kind::Sequence, {}});
      path.segments.back().asns.push_back(asn);
      pos = end;
    }
    skip_spaces();
  }
  if (path.segments.empty()) throw Error("empty AS path");
  return path;
}

std::string format_as_path(const AsPath& path) {
  std::string out;
  for (const auto& seg : path.segments) {
    if (seg.kind == PathSegment::Kind::Set) {
      if (!out.empty()) out += ' ';
      out += '{';
      for (std::size_t i = 0; i < seg.asns.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(seg.asns[i]);
      }
      out += '}';
    } else {
      for (const AsNum asn : seg.asns) {
        if (!out.empty()) out += ' ';
        out += std::to_string(asn);
      }
    }
  }
  return out;
}

UpdateRecord parse_update_line(std::string_view line, std::uint64_t line_no) {
  const auto fields = split(line, '|');
  if (fields.size() != 5 && fields.size() != 6)
    throw ParseError("expected 5 or 6 '|'-separated fields", line_no);

  UpdateRecord rec;
  rec.timestamp = parse_int<Timestamp>(fields[0], "timestamp", line_no);
  rec.peer_as = parse_int<AsNum>(fields[1], "peer AS", line_no);
  try {
    rec.peer_address = IpAddress::from_string(std::string(fields[2]));
    rec.prefix = Prefix::from_string(std::string(fields[4]));
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }

  if (fields[3] == "A") {
    rec.kind = UpdateKind::Announce;
    if (fields.size() != 6 || fields[5].empty())
      throw ParseError("announcement without AS path", line_no);
    try {
      rec.path = parse_as_path(fields[5]);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  } else if (fields[3] == "W") {
    rec.kind = UpdateKind::Withdraw;
    if (fields.size() != 5)
      throw ParseError("withdrawal with trailing path field", line_no);
  } else {
    throw ParseError("update kind must be 'A' or 'W'", line_no);
  }
  return rec;
}

SnapshotEntry parse_snapshot_line(std::string_view line, std::uint64_t line_no) {
  const auto fields = split(line, '|');
  if (fields.size() != 5)
    throw ParseError("expected 5 '|'-separated fields", line_no);

  SnapshotEntry entry;
  entry.timestamp = parse_int<Timestamp>(fields[0], "timestamp", line_no);
  entry.peer_as = parse_int<AsNum>(fields[1], "peer AS", line_no);
  if (fields[4].empty()) throw ParseError("snapshot route without AS path", line_no);
  try {
    entry.peer_address = IpAddress::from_string(std::string(fields[2]));
    entry.prefix = Prefix::from_string(std::string(fields[3]));
    entry.path = parse_as_path(fields[4]);
  } catch (const Error& e) {
    throw ParseError(e.what(), line_no);
  }
  return entry;
}

std::string format_update(const UpdateRecord& rec) {
  std::string out = std::to_string(rec.timestamp);
  out += '|';
  out += std::to_string(rec.peer_as);
  out += '|';
  out += rec.peer_address.to_string();
  out += rec.kind == UpdateKind::Announce ? "|A|" : "|W|";
  out += rec.prefix.to_string();
  if (rec.kind == UpdateKind::Announce) {
    out += '|';
    out += format_as_path(*rec.path);
  }
  return out;
}

std::string format_snapshot(const SnapshotEntry& entry) {
  std::string out = std::to_string(entry.timestamp);
  out += '|';
  out += std::to_string(entry.peer_as);
  out += '|';
  out += entry.peer_address.to_string();
  out += '|';
  out += entry.prefix.to_string();
  out += '|';
  out += format_as_path(entry.path);
  return out;
}

void write_update(std::ostream& out, const UpdateRecord& rec) {
  out << format_update(rec) << '\n';
}

void write_snapshot(std::ostream& out, const SnapshotEntry& entry) {
  out << format_snapshot(entry) << '\n';
}

namespace {

// Shared line loop for both text readers.
template <typename Entry, Entry (*ParseLine)(std::string_view, std::uint64_t)>
std::optional<Entry> next_line(std::istream& in, OnError on_error,
                               TextStats& stats, std::uint64_t& line_no,
                               std::string& line) {
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      Entry entry = ParseLine(line, line_no);
      ++stats.records;
      return entry;
    } catch (const ParseError&) {
      if (on_error == OnError::Abort) throw;
      ++stats.skipped_lines;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<UpdateRecord> TextUpdateReader::next() {
  return next_line<UpdateRecord, parse_update_line>(in_, on_error_, stats_,
                                                    line_no_, line_);
}

std::optional<SnapshotEntry> TextSnapshotReader::next() {
  return next_line<SnapshotEntry, parse_snapshot_line>(in_, on_error_, stats_,
                                                       line_no_, line_);
}

}  // namespace bgptopo
