#include "bgptopo/reset_detect.hpp"

#include <algorithm>
#include <tuple>

namespace bgptopo {

void ResetParams::validate() const {
  if (window_s <= 0) throw Error("reset params: window_s must be positive");
  if (!(surge_fraction_p > 0.0 && surge_fraction_p <= 1.0))
    throw Error("reset params: surge_fraction_p must be in (0, 1]");
  if (inactivity_t <= window_s)
    throw Error("reset params: inactivity_t must exceed window_s");
}

ResetDetector::ResetDetector(ResetParams params) : params_(params) {
  params_.validate();
}

void ResetDetector::reset_view(PeerState& st) {
  // The consumer flushes the peer's table at the event, so the
  // currently-held view restarts empty; ever-seen survives resets.
  if (params_.baseline == BaselineMode::CurrentlyHeld) st.held.clear();
  st.window.clear();
  st.in_window.clear();
}

void ResetDetector::check_inactivity(PeerState& st, const PeerId& peer,
                                     Timestamp now) {
  if (now - st.last_ts > params_.inactivity_t) {
    const Timestamp event_ts = st.last_ts + params_.inactivity_t;
    events_.push_back({peer, event_ts, ResetEvent::Cause::Inactivity});
    st.has_event = true;
    st.last_event_ts = event_ts;
    reset_view(st);
  }
}

void ResetDetector::feed(const UpdateRecord& rec) {
  Timestamp t = rec.timestamp;
  if (clock_set_ && t < clock_) t = clock_;  // same clamping as the rib
  clock_ = t;
  clock_set_ = true;

  auto [it, inserted] = peers_.try_emplace({rec.peer_as, rec.peer_address});
  PeerState& st = it->second;
  const PeerId& peer = it->first;

  if (!inserted) check_inactivity(st, peer, t);
  st.last_ts = t;

  // Slide the window to (t - window_s, t].
  while (!st.window.empty() && st.window.front().ts <= t - params_.window_s) {
    auto in_it = st.in_window.find(st.window.front().prefix);
    if (--in_it->second == 0) st.in_window.erase(in_it);
    st.window.pop_front();
  }

  st.window.push_back({t, rec.prefix, st.held.size()});
  ++st.in_window[rec.prefix];

  if (rec.kind == UpdateKind::Announce ||
      params_.baseline == BaselineMode::EverSeen) {
    st.held.insert(rec.prefix);
  } else {
    st.held.erase(rec.prefix);
  }

  const std::size_t baseline = st.window.front().baseline_before;
  const std::size_t unique = st.in_window.size();
  const Timestamp surge_ts = st.window.front().ts;
  if (baseline >= params_.min_baseline &&
      static_cast<double>(unique) >
          params_.surge_fraction_p * static_cast<double>(baseline) &&
      !(st.has_event && surge_ts < st.last_event_ts + params_.window_s)) {
    events_.push_back({peer, surge_ts, ResetEvent::Cause::Surge});
    st.has_event = true;
    st.last_event_ts = surge_ts;
    reset_view(st);
  }
}

std::vector<ResetEvent> ResetDetector::finish(Timestamp t_end) {
  if (clock_set_ && t_end < clock_)
    throw Error("reset detect: t_end precedes the stream clock");
  for (auto& [peer, st] : peers_) check_inactivity(st, peer, t_end);
  auto key = [](const ResetEvent& e) {
    return std::tuple(e.timestamp, e.peer.as, e.peer.address,
                      static_cast<int>(e.cause));
  };
  std::sort(events_.begin(), events_.end(),
            [&](const ResetEvent& a, const ResetEvent& b) {
              return key(a) < key(b);
            });
  return std::move(events_);
}

std::vector<ResetEvent> detect(std::span<const UpdateRecord> records,
                               const ResetParams& params, Timestamp t_end) {
  ResetDetector det(params);
  for (const auto& rec : records) det.feed(rec);
  return det.finish(t_end);
}

ReplayResult replay_with_detection(std::span<const UpdateRecord> records,
                                   Timestamp t_end, const ResetParams& params,
                                   const PathOptions& opts, bool enabled,
                                   std::vector<ResetEvent>* events_out,
                                   ReplayEngine::EventSink sink) {
  if (!enabled) {
    if (events_out) events_out->clear();
    ReplayEngine engine(opts, std::move(sink));
    for (const auto& rec : records) engine.feed(rec);
    return engine.finish(t_end);
  }
  std::vector<ResetEvent> events = detect(records, params, t_end);

  ReplayEngine engine(opts, std::move(sink));
  std::size_t next = 0;
  auto fire_until = [&](Timestamp t) {
    while (next < events.size() && events[next].timestamp <= t) {
      const ResetEvent& e = events[next++];
      engine.flush_peer(e.peer.as, e.peer.address, e.timestamp);
    }
  };
  for (const auto& rec : records) {
    fire_until(std::max(rec.timestamp, engine.clock()));
    engine.feed(rec);
  }
  fire_until(t_end);
  if (events_out) *events_out = std::move(events);
  return engine.finish(t_end);
}

void write_resets_csv(std::ostream& out, std::span<const ResetEvent> events) {
  out << "ts,peer_as,peer_ip,cause\n";
  for (const auto& e : events)
    out << e.timestamp << ',' << e.peer.as << ',' << e.peer.address.to_string()
        << ','
        << (e.cause == ResetEvent::Cause::Surge ? "surge" : "inactivity")
        << '\n';
}

}  // namespace bgptopo
