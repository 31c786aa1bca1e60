#include "bgptopo/mrt.hpp"

#include <cstring>
#include <map>
#include <string>

namespace bgptopo {
namespace {

constexpr std::uint16_t kTableDump = 12;
constexpr std::uint16_t kTableDumpV2 = 13;
constexpr std::uint16_t kBgp4mp = 16;
constexpr std::uint16_t kBgp4mpEt = 17;

constexpr std::uint16_t kAfiIpv4 = 1;

constexpr std::uint16_t kPeerIndexTable = 1;
constexpr std::uint16_t kRibIpv4Unicast = 2;

constexpr std::uint16_t kBgp4mpMessage = 1;
constexpr std::uint16_t kBgp4mpMessageAs4 = 4;

constexpr std::uint8_t kBgpUpdate = 2;
constexpr std::size_t kBgpHeaderLen = 19;  // 16-byte marker + len + type

constexpr std::uint8_t kAttrOrigin = 1;
constexpr std::uint8_t kAttrAsPath = 2;
constexpr std::uint8_t kAttrNextHop = 3;

// Bounded big-endian reads over one record's payload. Errors carry the
// record's file offset.
struct Cursor {
  const unsigned char* p = nullptr;
  std::size_t len = 0;
  std::size_t pos = 0;
  std::uint64_t record_offset = 0;

  void need(std::size_t n) const {
    if (len - pos < n)
      throw ParseError("truncated MRT record", 0, record_offset);
  }
  std::uint8_t u8() {
    need(1);
    return p[pos++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(p[pos] << 8 | p[pos + 1]);
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = static_cast<std::uint32_t>(p[pos]) << 24 |
                      static_cast<std::uint32_t>(p[pos + 1]) << 16 |
                      static_cast<std::uint32_t>(p[pos + 2]) << 8 |
                      static_cast<std::uint32_t>(p[pos + 3]);
    pos += 4;
    return v;
  }
  void skip(std::size_t n) {
    need(n);
    pos += n;
  }
  const unsigned char* bytes(std::size_t n) {
    need(n);
    const unsigned char* at = p + pos;
    pos += n;
    return at;
  }
  Cursor sub(std::size_t n) {
    need(n);
    Cursor c{p + pos, n, 0, record_offset};
    pos += n;
    return c;
  }
  bool done() const { return pos >= len; }
};

IpAddress read_ip(Cursor& c, bool v4) {
  IpAddress ip;
  ip.is_v4 = v4;
  const unsigned char* b = c.bytes(v4 ? 4 : 16);
  std::memcpy(ip.bytes.data(), b, v4 ? 4 : 16);
  return ip;
}

// NLRI-style prefix: length byte then just enough address bytes.
Prefix read_nlri_prefix(Cursor& c) {
  const std::uint8_t plen = c.u8();
  if (plen > 32)
    throw ParseError("prefix length over 32", 0, c.record_offset);
  const std::size_t nbytes = (plen + 7) / 8;
  const unsigned char* b = c.bytes(nbytes);
  std::uint32_t addr = 0;
  for (std::size_t i = 0; i < nbytes; ++i)
    addr |= static_cast<std::uint32_t>(b[i]) << (24 - 8 * i);
  return Prefix::make(addr, plen);
}

AsNum read_as(Cursor& c, int as_size) {
  return as_size == 2 ? c.u16() : c.u32();
}

// Segments arrive in wire order; adjacent sequences merge so parsed
// paths are in canonical form. Confederation segments map onto their
// plain counterparts.
AsPath parse_as_path_attr(Cursor val, int as_size) {
  AsPath path;
  while (!val.done()) {
    const std::uint8_t seg_type = val.u8();
    const std::uint8_t count = val.u8();
    PathSegment::Kind kind;
    switch (seg_type) {
      case 1:
      case 4:
        kind = PathSegment::Kind::Set;
        break;
      case 2:
      case 3:
        kind = PathSegment::Kind::Sequence;
        break;
      default:
        throw ParseError("unknown AS_PATH segment type", 0, val.record_offset);
    }
    std::vector<AsNum> asns;
    asns.reserve(count);
    for (std::uint8_t i = 0; i < count; ++i)
      asns.push_back(read_as(val, as_size));
    if (asns.empty()) continue;
    if (kind == PathSegment::Kind::Sequence && !path.segments.empty() &&
        path.segments.back().kind == PathSegment::Kind::Sequence) {
      auto& back = path.segments.back().asns;
      back.insert(back.end(), asns.begin(), asns.end());
    } else {
      path.segments.push_back({kind, std::move(asns)});
    }
  }
  return path;
}

// Walks a path-attribute block and returns the AS_PATH, if any.
std::optional<AsPath> parse_attributes(Cursor attrs, int as_size) {
  std::optional<AsPath> path;
  while (!attrs.done()) {
    const std::uint8_t flags = attrs.u8();
    const std::uint8_t type = attrs.u8();
    const std::size_t alen = (flags & 0x10) ? attrs.u16() : attrs.u8();
    Cursor value = attrs.sub(alen);
    if (type == kAttrAsPath) path = parse_as_path_attr(value, as_size);
    // AS4_PATH and everything else is parsed past.
  }
  return path;
}

// Serialization helpers for the writer.
struct ByteBuf {
  std::string b;

  void u8(std::uint8_t v) { b.push_back(static_cast<char>(v)); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void raw(const void* p, std::size_t n) {
    b.append(static_cast<const char*>(p), n);
  }
  void nlri_prefix(const Prefix& pfx) {
    u8(pfx.length);
    const std::size_t nbytes = (pfx.length + 7) / 8;
    for (std::size_t i = 0; i < nbytes; ++i)
      u8(static_cast<std::uint8_t>(pfx.addr >> (24 - 8 * i)));
  }
};

void append_as_path_attr(ByteBuf& attrs, const AsPath& path) {
  ByteBuf segs;
  for (const auto& seg : path.segments) {
    if (seg.kind == PathSegment::Kind::Set && seg.asns.size() > 255)
      throw Error("AS-set too large to encode");
    // Long sequences split at the 255-AS segment limit; the reader
    // merges them back.
    std::size_t at = 0;
    while (at < seg.asns.size()) {
      const std::size_t n = std::min<std::size_t>(seg.asns.size() - at, 255);
      segs.u8(seg.kind == PathSegment::Kind::Set ? 1 : 2);
      segs.u8(static_cast<std::uint8_t>(n));
      for (std::size_t i = 0; i < n; ++i)
        segs.u32(seg.asns[at + i]);
      at += n;
    }
  }
  if (segs.b.size() > 0xffff) throw Error("AS_PATH attribute too large");
  attrs.u8(0x50);  // transitive + extended length
  attrs.u8(kAttrAsPath);
  attrs.u16(static_cast<std::uint16_t>(segs.b.size()));
  attrs.raw(segs.b.data(), segs.b.size());
}

void append_standard_attrs(ByteBuf& attrs, const AsPath& path,
                           const IpAddress& next_hop) {
  attrs.u8(0x40);
  attrs.u8(kAttrOrigin);
  attrs.u8(1);
  attrs.u8(0);  // IGP
  append_as_path_attr(attrs, path);
  attrs.u8(0x40);
  attrs.u8(kAttrNextHop);
  attrs.u8(4);
  if (next_hop.is_v4)
    attrs.raw(next_hop.bytes.data(), 4);
  else
    attrs.u32(0);
}

void write_mrt_record(std::ostream& out, Timestamp ts, std::uint16_t type,
                      std::uint16_t subtype, const std::string& body) {
  ByteBuf hdr;
  hdr.u32(static_cast<std::uint32_t>(ts));
  hdr.u16(type);
  hdr.u16(subtype);
  hdr.u32(static_cast<std::uint32_t>(body.size()));
  out.write(hdr.b.data(), static_cast<std::streamsize>(hdr.b.size()));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw Error("MRT write failed");
}

}  // namespace

bool MrtReader::refill() {
  if (eof_) return false;
  unsigned char header[12];
  in_.read(reinterpret_cast<char*>(header), 12);
  const std::streamsize got = in_.gcount();
  if (got == 0) {
    eof_ = true;
    return false;
  }
  const std::uint64_t record_offset = offset_;
  auto be16 = [&](int i) {
    return static_cast<std::uint16_t>(header[i] << 8 | header[i + 1]);
  };
  auto be32 = [&](int i) {
    return static_cast<std::uint32_t>(header[i]) << 24 |
           static_cast<std::uint32_t>(header[i + 1]) << 16 |
           static_cast<std::uint32_t>(header[i + 2]) << 8 |
           static_cast<std::uint32_t>(header[i + 3]);
  };
  if (got < 12) {
    eof_ = true;
    if (on_error_ == OnError::Abort)
      throw ParseError("truncated MRT header", 0, record_offset);
    ++stats_.skipped;
    return false;
  }
  const Timestamp ts = be32(0);
  const std::uint16_t type = be16(4);
  const std::uint16_t subtype = be16(6);
  const std::uint32_t len = be32(8);

  std::string body(len, '\0');
  in_.read(body.data(), static_cast<std::streamsize>(len));
  if (in_.gcount() != static_cast<std::streamsize>(len)) {
    // The boundary of the next record is unknowable; the stream ends
    // here either way.
    eof_ = true;
    if (on_error_ == OnError::Abort)
      throw ParseError("MRT record length past end of file", 0, record_offset);
    ++stats_.skipped;
    return false;
  }
  offset_ += 12 + len;

  Cursor c{reinterpret_cast<const unsigned char*>(body.data()), body.size(), 0,
           record_offset};
  try {
    switch (type) {
      case kTableDump: {
        if (subtype != kAfiIpv4) {
          ++stats_.skipped;
          return true;
        }
        c.skip(4);  // view, sequence
        const std::uint32_t addr = c.u32();
        const std::uint8_t plen = c.u8();
        if (plen > 32)
          throw ParseError("prefix length over 32", 0, record_offset);
        c.skip(1);  // status
        const Timestamp originated = c.u32();
        IpAddress peer_ip = read_ip(c, true);
        const AsNum peer_as = c.u16();
        Cursor attrs = c.sub(c.u16());
        auto path = parse_attributes(attrs, 2);
        if (!path)
          throw ParseError("RIB entry without AS_PATH", 0, record_offset);
        queue_.push_back(SnapshotEntry{originated, peer_as, peer_ip,
                                       Prefix::make(addr, plen),
                                       std::move(*path)});
        break;
      }
      case kTableDumpV2: {
        if (subtype == kPeerIndexTable) {
          c.skip(4);            // collector BGP id
          c.skip(c.u16());      // view name
          const std::uint16_t count = c.u16();
          peer_table_.clear();
          peer_table_.reserve(count);
          for (std::uint16_t i = 0; i < count; ++i) {
            const std::uint8_t peer_type = c.u8();
            c.skip(4);  // peer BGP id
            IpAddress ip = read_ip(c, (peer_type & 0x01) == 0);
            const AsNum as = (peer_type & 0x02) ? c.u32() : c.u16();
            peer_table_.emplace_back(as, ip);
          }
        } else if (subtype == kRibIpv4Unicast) {
          c.skip(4);  // sequence
          const Prefix prefix = read_nlri_prefix(c);
          const std::uint16_t count = c.u16();
          for (std::uint16_t i = 0; i < count; ++i) {
            const std::uint16_t peer_index = c.u16();
            const Timestamp originated = c.u32();
            Cursor attrs = c.sub(c.u16());
            if (peer_index >= peer_table_.size())
              throw ParseError("RIB entry peer index out of range", 0,
                               record_offset);
            auto path = parse_attributes(attrs, 4);
            if (!path)
              throw ParseError("RIB entry without AS_PATH", 0, record_offset);
            queue_.push_back(SnapshotEntry{
                originated, peer_table_[peer_index].first,
                peer_table_[peer_index].second, prefix, std::move(*path)});
          }
        } else {
          ++stats_.skipped;
          return true;
        }
        break;
      }
      case kBgp4mp:
      case kBgp4mpEt: {
        if (type == kBgp4mpEt) c.skip(4);  // microseconds
        if (subtype != kBgp4mpMessage && subtype != kBgp4mpMessageAs4) {
          ++stats_.skipped;
          return true;
        }
        const int as_size = subtype == kBgp4mpMessageAs4 ? 4 : 2;
        const AsNum peer_as = read_as(c, as_size);
        read_as(c, as_size);  // local AS
        c.skip(2);            // interface index
        const std::uint16_t afi = c.u16();
        if (afi != 1 && afi != 2)
          throw ParseError("unknown BGP4MP address family", 0, record_offset);
        IpAddress peer_ip = read_ip(c, afi == 1);
        read_ip(c, afi == 1);  // local address
        c.skip(16);            // BGP marker
        const std::uint16_t bgp_len = c.u16();
        if (bgp_len < kBgpHeaderLen)
          throw ParseError("BGP message length too small", 0, record_offset);
        const std::uint8_t bgp_type = c.u8();
        Cursor msg = c.sub(bgp_len - kBgpHeaderLen);
        if (bgp_type != kBgpUpdate) {
          ++stats_.skipped;
          return true;
        }
        Cursor withdrawn = msg.sub(msg.u16());
        Cursor attrs = msg.sub(msg.u16());
        std::vector<Prefix> withdrawals;
        while (!withdrawn.done()) withdrawals.push_back(read_nlri_prefix(withdrawn));
        std::vector<Prefix> announced;
        while (!msg.done()) announced.push_back(read_nlri_prefix(msg));
        auto path = parse_attributes(attrs, as_size);
        if (!announced.empty() && (!path || path->segments.empty()))
          throw ParseError("announcement without AS_PATH", 0, record_offset);
        for (const Prefix& pfx : withdrawals)
          queue_.push_back(UpdateRecord{ts, peer_as, peer_ip,
                                        UpdateKind::Withdraw, pfx,
                                        std::nullopt});
        for (const Prefix& pfx : announced)
          queue_.push_back(
              UpdateRecord{ts, peer_as, peer_ip, UpdateKind::Announce, pfx,
                           *path});
        break;
      }
      default:
        ++stats_.skipped;
        return true;
    }
  } catch (const ParseError&) {
    if (on_error_ == OnError::Abort) throw;
    ++stats_.skipped;
    return true;
  }
  ++stats_.records;
  return true;
}

std::optional<MrtRecord> MrtReader::next() {
  while (queue_.empty()) {
    if (!refill()) return std::nullopt;
  }
  MrtRecord rec = std::move(queue_.front());
  queue_.pop_front();
  return rec;
}

void MrtWriter::write_update(const UpdateRecord& rec) {
  ByteBuf update;
  if (rec.kind == UpdateKind::Withdraw) {
    ByteBuf wd;
    wd.nlri_prefix(rec.prefix);
    update.u16(static_cast<std::uint16_t>(wd.b.size()));
    update.raw(wd.b.data(), wd.b.size());
    update.u16(0);  // no attributes
  } else {
    if (!rec.path) throw Error("announcement record without a path");
    update.u16(0);  // no withdrawals
    ByteBuf attrs;
    append_standard_attrs(attrs, *rec.path, rec.peer_address);
    update.u16(static_cast<std::uint16_t>(attrs.b.size()));
    update.raw(attrs.b.data(), attrs.b.size());
    update.nlri_prefix(rec.prefix);
  }

  ByteBuf body;
  body.u32(rec.peer_as);
  body.u32(0);  // local AS
  body.u16(0);  // interface index
  body.u16(rec.peer_address.is_v4 ? 1 : 2);
  body.raw(rec.peer_address.bytes.data(), rec.peer_address.is_v4 ? 4 : 16);
  for (int i = 0; i < (rec.peer_address.is_v4 ? 4 : 16); ++i) body.u8(0);
  for (int i = 0; i < 16; ++i) body.u8(0xff);  // marker
  body.u16(static_cast<std::uint16_t>(kBgpHeaderLen + update.b.size()));
  body.u8(kBgpUpdate);
  body.raw(update.b.data(), update.b.size());

  write_mrt_record(out_, rec.timestamp, kBgp4mp, kBgp4mpMessageAs4, body.b);
}

void MrtWriter::write_snapshot(std::span<const SnapshotEntry> entries,
                               Timestamp dump_ts) {
  std::map<std::pair<AsNum, IpAddress>, std::uint16_t> peer_index;
  std::vector<const std::pair<const std::pair<AsNum, IpAddress>,
                              std::uint16_t>*> peer_order;
  for (const auto& e : entries) {
    auto [it, inserted] = peer_index.try_emplace(
        {e.peer_as, e.peer_address},
        static_cast<std::uint16_t>(peer_index.size()));
    if (inserted) peer_order.push_back(&*it);
  }
  if (peer_index.size() > 0xffff) throw Error("too many peers for a dump");

  ByteBuf table;
  table.u32(0);  // collector BGP id
  table.u16(0);  // unnamed view
  table.u16(static_cast<std::uint16_t>(peer_order.size()));
  for (const auto* entry : peer_order) {
    const IpAddress& ip = entry->first.second;
    table.u8(static_cast<std::uint8_t>((ip.is_v4 ? 0 : 1) | 2));
    table.u32(0);  // peer BGP id
    table.raw(ip.bytes.data(), ip.is_v4 ? 4 : 16);
    table.u32(entry->first.first);
  }
  write_mrt_record(out_, dump_ts, kTableDumpV2, kPeerIndexTable, table.b);

  std::map<Prefix, std::vector<const SnapshotEntry*>> grouped;
  for (const auto& e : entries) grouped[e.prefix].push_back(&e);

  std::uint32_t seq = 0;
  for (const auto& [prefix, group] : grouped) {
    ByteBuf rib;
    rib.u32(seq++);
    rib.nlri_prefix(prefix);
    rib.u16(static_cast<std::uint16_t>(group.size()));
    for (const SnapshotEntry* e : group) {
      rib.u16(peer_index.at({e->peer_as, e->peer_address}));
      rib.u32(static_cast<std::uint32_t>(e->timestamp));
      ByteBuf attrs;
      append_standard_attrs(attrs, e->path, IpAddress::v4(0));
      rib.u16(static_cast<std::uint16_t>(attrs.b.size()));
      rib.raw(attrs.b.data(), attrs.b.size());
    }
    write_mrt_record(out_, dump_ts, kTableDumpV2, kRibIpv4Unicast, rib.b);
  }
}

}  // namespace bgptopo
