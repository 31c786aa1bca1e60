#pragma once

#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "bgptopo/path_semantics.hpp"
#include "bgptopo/rib.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

struct Interval {
  Timestamp start = 0;
  Timestamp end = 0;  // half-open [start, end)
  bool operator==(const Interval&) const = default;
};

/// When a link was visible over the measurement window.
struct VisibilityTimeline {
  Link link;
  std::vector<Interval> intervals;  // sorted, disjoint; zero-length retained
  Timestamp first_seen = 0;
  Timestamp last_visible = 0;   // end of the last interval, after closing
  Timestamp last_announce = 0;  // last announcing update carrying the link

  bool operator==(const VisibilityTimeline&) const = default;
};

/// Folds an Up/Down event stream into per-link timelines.
class TimelineBuilder {
 public:
  void on_event(const LinkEvent& event);

  /// Marks an announcing update carrying the link (tracked separately
  /// from Up events: a re-announce of a visible link emits no event).
  void on_announce(const Link& link, Timestamp t);

  /// Closes open intervals at t_end and returns the timelines.
  std::map<Link, VisibilityTimeline> finish(Timestamp t_end);

 private:
  struct Pending {
    VisibilityTimeline timeline;
    std::optional<Timestamp> open_start;
    bool seen = false;
  };
  std::map<Link, Pending> pending_;
};

struct ReplayResult {
  std::map<Link, VisibilityTimeline> timelines;
  RibStats stats;

  std::map<Link, Timestamp> first_seen() const;
};

/// Replays an update stream through the RIB, turning route changes
/// into link visibility. Records must arrive in stream order. If an
/// event sink is set, events are forwarded instead of accumulated.
class ReplayEngine {
 public:
  using EventSink = std::function<void(const LinkEvent&)>;

  explicit ReplayEngine(PathOptions opts = {}, EventSink sink = nullptr)
      : opts_(opts), sink_(std::move(sink)) {}

  void feed(const UpdateRecord& rec);
  void flush_peer(AsNum peer_as, const IpAddress& address, Timestamp t);

  /// Closes all open intervals at t_end (must be >= clock).
  ReplayResult finish(Timestamp t_end);

  const RibState& state() const { return rib_; }
  const std::vector<LinkEvent>& events() const { return events_; }
  Timestamp clock() const { return rib_.clock(); }

 private:
  void dispatch(std::vector<LinkEvent> events);

  PathOptions opts_;
  EventSink sink_;
  RibState rib_;
  TimelineBuilder builder_;
  std::vector<LinkEvent> events_;
};

/// Whole-stream convenience wrapper.
ReplayResult replay(std::span<const UpdateRecord> records, Timestamp t_end,
                    const PathOptions& opts = {});

// Link-event log, one event per line: <unix_ts>|<lo>|<hi>|U or ...|D,
// sorted by timestamp.
void write_event_log(std::ostream& out, std::span<const LinkEvent> events);
std::vector<LinkEvent> read_event_log(std::istream& in);
LinkEvent parse_event_line(std::string_view line, std::uint64_t line_no = 0);
std::string format_event(const LinkEvent& event);

/// Rebuilds timelines from a persisted event log.
std::map<Link, VisibilityTimeline> timelines_from_events(
    std::span<const LinkEvent> events, Timestamp t_end);

}  // namespace bgptopo
