#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <vector>

#include "bgptopo/path_semantics.hpp"
#include "bgptopo/replay.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

/// What a surge is measured against: the prefixes the peer currently
/// holds (drops on withdraw, cleared at a reset), or every prefix the
/// peer has ever mentioned.
enum class BaselineMode : std::uint8_t { CurrentlyHeld, EverSeen };

struct ResetParams {
  Timestamp window_s = 4;          // sliding surge window, seconds
  double surge_fraction_p = 0.80;  // unique prefixes > p * baseline
  Timestamp inactivity_t = 240;    // silence longer than this is a reset
  std::size_t min_baseline = 10;   // ignore surges against tiny baselines
  BaselineMode baseline = BaselineMode::CurrentlyHeld;

  void validate() const;  // throws Error on out-of-range values
};

struct ResetEvent {
  enum class Cause : std::uint8_t { Surge, Inactivity };
  PeerId peer;
  Timestamp timestamp = 0;
  Cause cause = Cause::Surge;

  bool operator==(const ResetEvent&) const = default;
};

/// Streaming reset detector. Feed updates in stream order; events
/// come out of finish() sorted by (timestamp, peer, cause).
///
/// A surge fires when the unique prefixes a peer updated inside the
/// last window_s seconds exceed surge_fraction_p times the baseline as
/// of the window's start; the event is backdated to the window's first
/// update. An inactivity event fires once per silence gap longer than
/// inactivity_t, at silence start + inactivity_t; gaps are recognized
/// retroactively (at the peer's next update, or at finish). Either
/// event resets the peer's held-prefix view, mirroring the table flush
/// the consumer performs.
class ResetDetector {
 public:
  explicit ResetDetector(ResetParams params);

  void feed(const UpdateRecord& rec);
  std::vector<ResetEvent> finish(Timestamp t_end);  // t_end >= clock

 private:
  struct WindowEntry {
    Timestamp ts = 0;
    Prefix prefix;
    std::size_t baseline_before = 0;  // baseline as of just before this update
  };
  struct PeerState {
    std::deque<WindowEntry> window;
    std::map<Prefix, std::size_t> in_window;  // prefix -> entries in window
    std::set<Prefix> held;
    Timestamp last_ts = 0;
    bool has_event = false;
    Timestamp last_event_ts = 0;
  };

  void check_inactivity(PeerState& st, const PeerId& peer, Timestamp now);
  void reset_view(PeerState& st);

  ResetParams params_;
  std::map<PeerId, PeerState> peers_;
  std::vector<ResetEvent> events_;
  Timestamp clock_ = 0;
  bool clock_set_ = false;
};

/// One-shot detection over a whole stream.
std::vector<ResetEvent> detect(std::span<const UpdateRecord> records,
                               const ResetParams& params, Timestamp t_end);

/// Replay with a peer-table flush injected at each detected reset.
/// Runs detection first, then replays, firing every event whose
/// timestamp is at or before the effective time of the record about to
/// be applied. With enabled == false no events fire and the result is
/// bit-identical to plain replay. A sink, when given, receives the
/// link events as they are emitted (replay.hpp semantics).
ReplayResult replay_with_detection(std::span<const UpdateRecord> records,
                                   Timestamp t_end, const ResetParams& params,
                                   const PathOptions& opts = {},
                                   bool enabled = true,
                                   std::vector<ResetEvent>* events_out = nullptr,
                                   ReplayEngine::EventSink sink = nullptr);

// CSV: ts,peer_as,peer_ip,cause with cause "surge" | "inactivity".
void write_resets_csv(std::ostream& out, std::span<const ResetEvent> events);

}  // namespace bgptopo
