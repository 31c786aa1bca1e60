#include "bgptopo/replay.hpp"

#include <charconv>
#include <string>

namespace bgptopo {

void TimelineBuilder::on_event(const LinkEvent& event) {
  Pending& p = pending_[event.link];
  if (!p.seen) {
    p.seen = true;
    p.timeline.link = event.link;
    p.timeline.first_seen = event.timestamp;
  }
  if (event.dir == LinkEvent::Dir::Up) {
    if (!p.open_start) p.open_start = event.timestamp;
  } else if (p.open_start) {
    p.timeline.intervals.push_back({*p.open_start, event.timestamp});
    p.open_start.reset();
  }
}

void TimelineBuilder::on_announce(const Link& link, Timestamp t) {
  Pending& p = pending_[link];
  if (t > p.timeline.last_announce) p.timeline.last_announce = t;
}

std::map<Link, VisibilityTimeline> TimelineBuilder::finish(Timestamp t_end) {
  std::map<Link, VisibilityTimeline> out;
  for (auto& [link, p] : pending_) {
    if (!p.seen) continue;  // announce-only tracking, no Up ever
    if (p.open_start) {
      p.timeline.intervals.push_back({*p.open_start, t_end});
      p.open_start.reset();
    }
    p.timeline.last_visible = p.timeline.intervals.empty()
                                  ? p.timeline.first_seen
                                  : p.timeline.intervals.back().end;
    out.emplace(link, std::move(p.timeline));
  }
  return out;
}

std::map<Link, Timestamp> ReplayResult::first_seen() const {
  std::map<Link, Timestamp> out;
  for (const auto& [link, tl] : timelines) out.emplace(link, tl.first_seen);
  return out;
}

void ReplayEngine::dispatch(std::vector<LinkEvent> events) {
  for (const LinkEvent& event : events) {
    builder_.on_event(event);
    if (sink_)
      sink_(event);
    else
      events_.push_back(event);
  }
}

void ReplayEngine::feed(const UpdateRecord& rec) {
  std::vector<Link> links;
  if (rec.kind == UpdateKind::Announce)
    links = route_links(*rec.path, rec.peer_as, opts_);
  dispatch(rib_.apply(rec, links));
  if (rec.kind == UpdateKind::Announce)
    for (const Link& link : links) builder_.on_announce(link, rib_.clock());
}

void ReplayEngine::flush_peer(AsNum peer_as, const IpAddress& address,
                              Timestamp t) {
  dispatch(rib_.flush_peer(peer_as, address, t));
}

ReplayResult ReplayEngine::finish(Timestamp t_end) {
  if (t_end < rib_.clock())
    throw Error("measurement end precedes the replay clock");
  ReplayResult result;
  result.timelines = builder_.finish(t_end);
  result.stats = rib_.stats();
  return result;
}

ReplayResult replay(std::span<const UpdateRecord> records, Timestamp t_end,
                    const PathOptions& opts) {
  ReplayEngine engine(opts);
  for (const UpdateRecord& rec : records) engine.feed(rec);
  return engine.finish(t_end);
}

std::string format_event(const LinkEvent& event) {
  std::string out = std::to_string(event.timestamp);
  out += '|';
  out += std::to_string(event.link.lo);
  out += '|';
  out += std::to_string(event.link.hi);
  out += event.dir == LinkEvent::Dir::Up ? "|U" : "|D";
  return out;
}

void write_event_log(std::ostream& out, std::span<const LinkEvent> events) {
  for (const LinkEvent& event : events) out << format_event(event) << '\n';
}

LinkEvent parse_event_line(std::string_view line, std::uint64_t line_no) {
  LinkEvent event;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  const auto field = [&](auto& value) {
    auto [q, ec] = std::from_chars(p, end, value);
    if (ec != std::errc{} || q == end || *q != '|')
      throw ParseError("malformed event line", line_no);
    p = q + 1;
  };
  field(event.timestamp);
  field(event.link.lo);
  field(event.link.hi);
  if (end - p != 1 || (*p != 'U' && *p != 'D'))
    throw ParseError("malformed event line", line_no);
  event.dir = *p == 'U' ? LinkEvent::Dir::Up : LinkEvent::Dir::Down;
  if (event.link.lo >= event.link.hi)
    throw ParseError("event link not canonical", line_no);
  return event;
}

std::vector<LinkEvent> read_event_log(std::istream& in) {
  std::vector<LinkEvent> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.back() == '\r') line.pop_back();
    out.push_back(parse_event_line(line, line_no));
  }
  return out;
}

std::map<Link, VisibilityTimeline> timelines_from_events(
    std::span<const LinkEvent> events, Timestamp t_end) {
  TimelineBuilder builder;
  for (const LinkEvent& event : events) builder.on_event(event);
  return builder.finish(t_end);
}

}  // namespace bgptopo
