// astopo: batch driver for AS-level topology discovery from BGP update
// streams. Subcommands compose the library into reproducible file
// pipelines: ingest (stream -> link events + edge lists), metrics
// (intermediates -> CSV report set), diff (edge-list comparison),
// synth (ground-truth scenario generation), report (ingest + metrics).
//
// All outputs are written atomically (temp + rename) with fixed
// ordering, so identical inputs and flags give byte-identical files.
// Diagnostics go to stderr; stdout stays silent.

#include <zlib.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bgptopo/graph.hpp"
#include "bgptopo/io_util.hpp"
#include "bgptopo/metrics.hpp"
#include "bgptopo/mrt.hpp"
#include "bgptopo/path_semantics.hpp"
#include "bgptopo/replay.hpp"
#include "bgptopo/reset_detect.hpp"
#include "bgptopo/synth.hpp"
#include "bgptopo/temporal.hpp"
#include "bgptopo/text_format.hpp"
#include "bgptopo/types.hpp"

namespace fs = std::filesystem;

namespace {

using namespace bgptopo;

// ---------------------------------------------------------------- io

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Whole-file read; .gz transparently inflated. Archives compressed
// with bzip2 must be piped through bzcat into a plain file first.
std::string read_input_file(const std::string& path) {
  if (has_suffix(path, ".gz")) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw Error("cannot open " + path);
    std::string data;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0)
      data.append(buf, static_cast<std::size_t>(n));
    if (n < 0) {
      int err = 0;
      std::string msg = gzerror(f, &err);
      gzclose(f);
      throw Error("cannot decompress " + path + ": " + msg);
    }
    gzclose(f);
    return data;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fill) {
  AtomicFileWriter writer(path);
  fill(writer.stream());
  writer.commit();
}

struct LoadStats {
  std::uint64_t records = 0;
  std::uint64_t skipped = 0;          // malformed units skipped on request
  std::uint64_t ignored_entries = 0;  // wrong-kind records in mixed MRT input
};

std::vector<UpdateRecord> load_updates(const std::vector<std::string>& paths,
                                       const std::string& format,
                                       OnError on_error, LoadStats& stats) {
  std::vector<UpdateRecord> records;
  for (const auto& path : paths) {
    std::istringstream in(read_input_file(path));
    try {
      if (format == "mrt") {
        MrtReader reader(in, on_error);
        while (auto rec = reader.next()) {
          if (auto* upd = std::get_if<UpdateRecord>(&*rec))
            records.push_back(std::move(*upd));
          else
            ++stats.ignored_entries;
        }
        stats.records += reader.stats().records;
        stats.skipped += reader.stats().skipped;
      } else {
        TextUpdateReader reader(in, on_error);
        while (auto rec = reader.next()) records.push_back(std::move(*rec));
        stats.records += reader.stats().records;
        stats.skipped += reader.stats().skipped_lines;
      }
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what() +
                           (e.line != 0
                                ? " (line " + std::to_string(e.line) + ")"
                                : " (offset " + std::to_string(e.offset) + ")"),
                       e.line, e.offset);
    }
  }
  return records;
}

std::vector<SnapshotEntry> load_snapshots(const std::vector<std::string>& paths,
                                          const std::string& format,
                                          OnError on_error, LoadStats& stats) {
  std::vector<SnapshotEntry> entries;
  for (const auto& path : paths) {
    std::istringstream in(read_input_file(path));
    try {
      if (format == "mrt") {
        MrtReader reader(in, on_error);
        while (auto rec = reader.next()) {
          if (auto* entry = std::get_if<SnapshotEntry>(&*rec))
            entries.push_back(std::move(*entry));
          else
            ++stats.ignored_entries;
        }
        stats.records += reader.stats().records;
        stats.skipped += reader.stats().skipped;
      } else {
        TextSnapshotReader reader(in, on_error);
        while (auto entry = reader.next()) entries.push_back(std::move(*entry));
        stats.records += reader.stats().records;
        stats.skipped += reader.stats().skipped_lines;
      }
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what() +
                           (e.line != 0
                                ? " (line " + std::to_string(e.line) + ")"
                                : " (offset " + std::to_string(e.offset) + ")"),
                       e.line, e.offset);
    }
  }
  return entries;
}

// Last-announce sidecar: "<lo> <hi> <unix_ts>" per link, edge-list order.
void write_announces(std::ostream& out,
                     const std::map<Link, VisibilityTimeline>& timelines) {
  for (const auto& [link, tl] : timelines)
    out << link.lo << ' ' << link.hi << ' ' << tl.last_announce << '\n';
}

std::map<Link, Timestamp> read_announces(std::istream& in) {
  std::map<Link, Timestamp> result;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    AsNum lo = 0, hi = 0;
    Timestamp ts = 0;
    if (!(fields >> lo >> hi >> ts) || !(fields >> std::ws).eof())
      throw ParseError("malformed announce line", line_no);
    if (lo >= hi) throw ParseError("announce link not canonical", line_no);
    result[{lo, hi}] = ts;
  }
  return result;
}

AsGraph subset_graph(const AsGraph& source, const std::vector<Link>& links) {
  AsGraph g;
  for (const Link& link : links) g.add_edge(link, source.edges().at(link));
  return g;
}

// ----------------------------------------------------------- options

struct IngestOptions {
  std::vector<std::string> updates;
  std::vector<std::string> btds;
  std::string format = "text";
  std::string out_dir;
  std::string on_parse_error = "abort";
  std::string asset_policy = "run";
  Timestamp t_end = -1;  // -1: last record timestamp
  std::string reset_detect = "off";
  Timestamp reset_s = 4;
  double reset_p = 0.80;
  Timestamp reset_t = 240;
  std::size_t reset_min_baseline = 10;
  std::string reset_baseline = "held";
};

struct MetricsOptions {
  std::string events_path;
  std::string edges_path;
  std::string btd_edges_path;  // optional
  std::string announces_path;  // required for --nl-mode last-announce
  std::string out_dir;
  Timestamp t_end = -1;  // -1: latest timestamp in the inputs
  std::string nl_mode = "visible-end";
  std::string degdeg_degrees = "union";
  std::string degdeg_binning = "log10";
  unsigned threads = 0;
};

struct DiffOptions {
  std::string a_path;
  std::string b_path;
  std::string out_dir;
};

struct SynthOptions {
  SynthConfig cfg;
  std::string out_dir;
  std::vector<Timestamp> snapshot_at;
};

PathOptions path_options(const std::string& asset_policy) {
  PathOptions opts;
  opts.set_policy =
      asset_policy == "drop-path" ? AsSetPolicy::DropPath : AsSetPolicy::Run;
  return opts;
}

ResetParams reset_params(const IngestOptions& o) {
  ResetParams p;
  p.window_s = o.reset_s;
  p.surge_fraction_p = o.reset_p;
  p.inactivity_t = o.reset_t;
  p.min_baseline = o.reset_min_baseline;
  p.baseline = o.reset_baseline == "ever" ? BaselineMode::EverSeen
                                          : BaselineMode::CurrentlyHeld;
  return p;
}

// ------------------------------------------------------------ ingest

struct IngestResult {
  ReplayResult replay;
  std::vector<LinkEvent> events;
  std::vector<ResetEvent> resets;
  AsGraph updates_graph;
  std::optional<AsGraph> btd_graph;
  Timestamp t_end = 0;
};

IngestResult run_ingest(const IngestOptions& o) {
  const OnError on_error =
      o.on_parse_error == "skip" ? OnError::Skip : OnError::Abort;
  const PathOptions popts = path_options(o.asset_policy);

  LoadStats load_stats;
  std::vector<UpdateRecord> records =
      load_updates(o.updates, o.format, on_error, load_stats);

  Timestamp clock = 0;
  for (const auto& rec : records) clock = std::max(clock, rec.timestamp);
  const Timestamp t_end = o.t_end >= 0 ? o.t_end : clock;

  IngestResult result;
  result.t_end = t_end;
  result.replay = replay_with_detection(
      records, t_end, reset_params(o), popts, o.reset_detect == "on",
      &result.resets,
      [&result](const LinkEvent& e) { result.events.push_back(e); });
  result.updates_graph = build_graph(result.replay.first_seen());

  if (!o.btds.empty()) {
    LoadStats btd_stats;
    std::vector<SnapshotEntry> entries =
        load_snapshots(o.btds, o.format, on_error, btd_stats);
    AsGraph g;
    for (const auto& entry : entries)
      for (const Link& link : route_links(entry.path, entry.peer_as, popts))
        g.add_edge(link, entry.timestamp);
    result.btd_graph = std::move(g);
    load_stats.records += btd_stats.records;
    load_stats.skipped += btd_stats.skipped;
    load_stats.ignored_entries += btd_stats.ignored_entries;
  }

  const fs::path out(o.out_dir);
  fs::create_directories(out);
  write_file(out / "events.txt", [&](std::ostream& s) {
    write_event_log(s, result.events);
  });
  write_file(out / "edges.txt", [&](std::ostream& s) {
    write_edge_list(s, result.updates_graph);
  });
  write_file(out / "announces.txt", [&](std::ostream& s) {
    write_announces(s, result.replay.timelines);
  });
  if (result.btd_graph) {
    write_file(out / "btd_edges.txt", [&](std::ostream& s) {
      write_edge_list(s, *result.btd_graph);
    });
  }
  if (o.reset_detect == "on") {
    write_file(out / "resets.csv", [&](std::ostream& s) {
      write_resets_csv(s, result.resets);
    });
  }
  write_file(out / "window.txt", [&](std::ostream& s) {
    s << "t_end=" << t_end << '\n';
  });
  write_file(out / "ingest_stats.txt", [&](std::ostream& s) {
    const RibStats& rib = result.replay.stats;
    s << "update_records=" << records.size() << '\n'
      << "source_records=" << load_stats.records << '\n'
      << "parse_skipped=" << load_stats.skipped << '\n'
      << "ignored_entries=" << load_stats.ignored_entries << '\n'
      << "applied=" << rib.applied << '\n'
      << "withdraw_noops=" << rib.withdraw_noops << '\n'
      << "clamped_timestamps=" << rib.clamped_timestamps << '\n'
      << "flushes=" << rib.flushes << '\n'
      << "reset_events=" << result.resets.size() << '\n'
      << "links=" << result.replay.timelines.size() << '\n'
      << "t_end=" << t_end << '\n';
  });
  return result;
}

// ----------------------------------------------------------- metrics

void emit_metrics(const fs::path& out,
                  const std::map<Link, VisibilityTimeline>& timelines,
                  Timestamp t_end, NlMode nl_mode, const AsGraph& g,
                  const AsGraph* g_btd, const DegreeBinning& binning,
                  DegreeSource source, unsigned threads) {
  fs::create_directories(out);

  std::vector<TemporalStats> temporal;
  temporal.reserve(timelines.size());
  for (const auto& [link, tl] : timelines)
    temporal.push_back(compute_stats(tl, t_end, nl_mode));
  write_file(out / "npnl.csv", [&](std::ostream& s) {
    write_temporal_csv(s, temporal);
  });

  std::set<Link> btd_links;
  if (g_btd != nullptr)
    for (const auto& [link, ts] : g_btd->edges()) btd_links.insert(link);
  write_file(out / "buckets.csv", [&](std::ostream& s) {
    write_bucket_csv(s, bucket_np(temporal, btd_links));
  });

  const auto ccdf = degree_ccdf(g);
  write_file(out / "ccdf.csv",
             [&](std::ostream& s) { write_ccdf_csv(s, ccdf); });
  write_file(out / "fit.csv", [&](std::ostream& s) {
    write_fit_csv(s, fit_powerlaw(ccdf));
  });

  std::vector<Link> all_links;
  all_links.reserve(g.edge_count());
  for (const auto& [link, ts] : g.edges()) all_links.push_back(link);
  write_file(out / "degdeg.csv", [&](std::ostream& s) {
    write_degdeg_csv(s, degree_degree(g, all_links, binning));
  });

  write_file(out / "betweenness.csv", [&](std::ostream& s) {
    write_betweenness_csv(s, edge_betweenness(g, threads));
  });

  std::set<Timestamp> sample_set;
  for (const auto& [link, ts] : g.edges()) sample_set.insert(ts);
  sample_set.insert(t_end);
  const std::vector<Timestamp> samples(sample_set.begin(), sample_set.end());
  write_file(out / "cumulative.csv", [&](std::ostream& s) {
    write_cumulative_csv(s, cumulative_links(g, samples));
  });

  std::string summary;
  {
    std::ostringstream s;
    s << "updates_links=" << g.edge_count() << '\n'
      << "updates_nodes=" << g.node_count() << '\n';
    if (g_btd != nullptr) {
      const GraphDiff d = diff(g, *g_btd);
      s << "btd_links=" << g_btd->edge_count() << '\n'
        << "btd_nodes=" << g_btd->node_count() << '\n'
        << "links_only_updates=" << d.only_a.size() << '\n'
        << "links_only_btd=" << d.only_b.size() << '\n'
        << "links_both=" << d.both.size() << '\n';
      // Headline deltas: how much bigger the updates-derived graph is.
      const auto pct_more = [](std::size_t updates, std::size_t btd) {
        return format_double(
            (static_cast<double>(updates) - static_cast<double>(btd)) *
            100.0 / static_cast<double>(btd));
      };
      if (g_btd->edge_count() > 0)
        s << "pct_more_links="
          << pct_more(g.edge_count(), g_btd->edge_count()) << '\n';
      if (g_btd->node_count() > 0)
        s << "pct_more_nodes="
          << pct_more(g.node_count(), g_btd->node_count()) << '\n';

      write_file(out / "diff_only_updates.txt", [&](std::ostream& f) {
        write_edge_list(f, subset_graph(g, d.only_a));
      });
      write_file(out / "diff_only_btd.txt", [&](std::ostream& f) {
        write_edge_list(f, subset_graph(*g_btd, d.only_b));
      });
      write_file(out / "diff_both.txt", [&](std::ostream& f) {
        write_edge_list(f, subset_graph(g, d.both));
      });
      write_file(out / "degdeg_btd.csv", [&](std::ostream& f) {
        if (source == DegreeSource::OwnGraph) {
          std::vector<Link> btd_all;
          for (const auto& [link, ts] : g_btd->edges())
            btd_all.push_back(link);
          write_degdeg_csv(f, degree_degree(*g_btd, btd_all, binning));
        } else {
          write_degdeg_csv(f, degree_degree(g, d.both, binning));
        }
      });
      write_file(out / "ratio.csv", [&](std::ostream& f) {
        write_ratio_csv(f, degree_ratio_matrix(*g_btd, g, binning, source));
      });
    }
    summary = s.str();
  }
  write_file(out / "summary.txt",
             [&](std::ostream& s) { s << summary; });
}

int cmd_metrics(const MetricsOptions& o) {
  std::vector<LinkEvent> events;
  {
    std::istringstream in(read_input_file(o.events_path));
    events = read_event_log(in);
  }
  AsGraph g;
  {
    std::istringstream in(read_input_file(o.edges_path));
    g = read_edge_list(in);
  }
  std::optional<AsGraph> g_btd;
  if (!o.btd_edges_path.empty()) {
    std::istringstream in(read_input_file(o.btd_edges_path));
    g_btd = read_edge_list(in);
  }

  Timestamp t_end = o.t_end;
  if (t_end < 0) {
    // An event log ends at the last visibility *change*, which may predate
    // the end of the measurement window (quiet tails produce no events), so
    // prefer the window ingest recorded next to the log.
    const fs::path sibling = fs::path(o.events_path).parent_path() / "window.txt";
    std::ifstream win(sibling);
    for (std::string line; std::getline(win, line);) {
      if (line.rfind("t_end=", 0) == 0)
        t_end = std::stoll(line.substr(6));
    }
  }
  if (t_end < 0) {
    Timestamp latest = 0;
    for (const auto& e : events) latest = std::max(latest, e.timestamp);
    for (const auto& [link, ts] : g.edges()) latest = std::max(latest, ts);
    t_end = latest;
  }

  auto timelines = timelines_from_events(events, t_end);

  const NlMode nl_mode = o.nl_mode == "last-announce" ? NlMode::LastAnnounce
                                                      : NlMode::VisibleEnd;
  if (nl_mode == NlMode::LastAnnounce) {
    if (o.announces_path.empty())
      throw Error("--nl-mode last-announce needs --announces");
    std::istringstream in(read_input_file(o.announces_path));
    const auto announces = read_announces(in);
    for (auto& [link, tl] : timelines) {
      const auto it = announces.find(link);
      if (it == announces.end())
        throw Error("announce sidecar is missing link " +
                    std::to_string(link.lo) + "-" + std::to_string(link.hi));
      tl.last_announce = it->second;
    }
  }

  DegreeBinning binning;
  binning.kind = o.degdeg_binning == "raw" ? DegreeBinning::Kind::Raw
                                           : DegreeBinning::Kind::Log10;
  const DegreeSource source = o.degdeg_degrees == "own"
                                  ? DegreeSource::OwnGraph
                                  : DegreeSource::UnionGraph;

  emit_metrics(fs::path(o.out_dir), timelines, t_end, nl_mode, g,
               g_btd ? &*g_btd : nullptr, binning, source, o.threads);
  return 0;
}

int cmd_diff(const DiffOptions& o) {
  AsGraph a, b;
  {
    std::istringstream in(read_input_file(o.a_path));
    a = read_edge_list(in);
  }
  {
    std::istringstream in(read_input_file(o.b_path));
    b = read_edge_list(in);
  }
  const GraphDiff d = diff(a, b);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  write_file(out / "only_a.txt", [&](std::ostream& s) {
    write_edge_list(s, subset_graph(a, d.only_a));
  });
  write_file(out / "only_b.txt", [&](std::ostream& s) {
    write_edge_list(s, subset_graph(b, d.only_b));
  });
  write_file(out / "both.txt", [&](std::ostream& s) {
    write_edge_list(s, subset_graph(a, d.both));
  });
  write_file(out / "diff_summary.txt", [&](std::ostream& s) {
    s << "a_links=" << a.edge_count() << '\n'
      << "b_links=" << b.edge_count() << '\n'
      << "only_a=" << d.only_a.size() << '\n'
      << "only_b=" << d.only_b.size() << '\n'
      << "both=" << d.both.size() << '\n';
  });
  return 0;
}

int cmd_synth(const SynthOptions& o) {
  const Scenario sc = generate(o.cfg);
  const fs::path out(o.out_dir);
  fs::create_directories(out);
  write_file(out / "stream.txt", [&](std::ostream& s) {
    for (const auto& rec : sc.stream) write_update(s, rec);
  });
  auto dump_snapshot = [&](const fs::path& path, Timestamp t) {
    write_file(path, [&](std::ostream& s) {
      for (const auto& entry : sc.snapshot_at(t)) write_snapshot(s, entry);
    });
  };
  dump_snapshot(out / "snapshot_end.txt", sc.t_end);
  for (Timestamp t : o.snapshot_at)
    dump_snapshot(out / ("snapshot_" + std::to_string(t) + ".txt"), t);
  write_file(out / "manifest.csv",
             [&](std::ostream& s) { write_manifest_csv(s, sc); });
  write_file(out / "truth_edges.txt", [&](std::ostream& s) {
    write_edge_list(s, sc.truth_graph);
  });
  return 0;
}

int cmd_report(const IngestOptions& ingest_opts, const MetricsOptions& mo) {
  IngestResult ingested = run_ingest(ingest_opts);

  const NlMode nl_mode = mo.nl_mode == "last-announce" ? NlMode::LastAnnounce
                                                       : NlMode::VisibleEnd;
  DegreeBinning binning;
  binning.kind = mo.degdeg_binning == "raw" ? DegreeBinning::Kind::Raw
                                            : DegreeBinning::Kind::Log10;
  const DegreeSource source = mo.degdeg_degrees == "own"
                                  ? DegreeSource::OwnGraph
                                  : DegreeSource::UnionGraph;
  emit_metrics(fs::path(ingest_opts.out_dir), ingested.replay.timelines,
               ingested.t_end, nl_mode, ingested.updates_graph,
               ingested.btd_graph ? &*ingested.btd_graph : nullptr, binning,
               source, mo.threads);
  return 0;
}

void add_reset_flags(CLI::App* cmd, IngestOptions& o) {
  cmd->add_option("--reset-detect", o.reset_detect,
                  "inject table flushes at detected session resets")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  cmd->add_option("--reset-s", o.reset_s, "surge window, seconds")
      ->capture_default_str();
  cmd->add_option("--reset-p", o.reset_p, "surge fraction of baseline")
      ->capture_default_str();
  cmd->add_option("--reset-t", o.reset_t, "inactivity threshold, seconds")
      ->capture_default_str();
  cmd->add_option("--reset-min-baseline", o.reset_min_baseline,
                  "ignore surges against fewer held prefixes")
      ->capture_default_str();
  cmd->add_option("--reset-baseline", o.reset_baseline,
                  "surge baseline: currently held or ever seen prefixes")
      ->check(CLI::IsMember({"held", "ever"}))
      ->capture_default_str();
}

void add_ingest_flags(CLI::App* cmd, IngestOptions& o, bool updates_required) {
  auto* updates = cmd->add_option("--updates", o.updates,
                                  "update stream file(s); .gz accepted")
                      ->check(CLI::ExistingFile);
  if (updates_required) updates->required();
  cmd->add_option("--btd", o.btds, "routing-table snapshot file(s)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", o.format, "input encoding")
      ->check(CLI::IsMember({"text", "mrt"}))
      ->capture_default_str();
  cmd->add_option("--t-end", o.t_end,
                  "measurement window end (default: last record)");
  cmd->add_option("--on-parse-error", o.on_parse_error,
                  "abort on malformed input, or skip and count")
      ->check(CLI::IsMember({"abort", "skip"}))
      ->capture_default_str();
  cmd->add_option("--asset-policy", o.asset_policy,
                  "AS-set handling: run-break only, or drop whole path")
      ->check(CLI::IsMember({"run", "drop-path"}))
      ->capture_default_str();
  add_reset_flags(cmd, o);
}

void add_metrics_output_flags(CLI::App* cmd, MetricsOptions& o) {
  cmd->add_option("--nl-mode", o.nl_mode, "lifetime end: visibility or announce")
      ->check(CLI::IsMember({"visible-end", "last-announce"}))
      ->capture_default_str();
  cmd->add_option("--degdeg-degrees", o.degdeg_degrees,
                  "degrees for joint-degree outputs of the snapshot subgraph")
      ->check(CLI::IsMember({"union", "own"}))
      ->capture_default_str();
  cmd->add_option("--degdeg-binning", o.degdeg_binning, "joint-degree axes")
      ->check(CLI::IsMember({"log10", "raw"}))
      ->capture_default_str();
  cmd->add_option("--threads", o.threads,
                  "betweenness worker threads (0 = machine default)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AS-level topology discovery from BGP update streams"};
  app.require_subcommand(1);

  IngestOptions ingest_opts;
  auto* ingest = app.add_subcommand(
      "ingest", "replay updates into link events and edge lists");
  ingest->set_config("--config");
  add_ingest_flags(ingest, ingest_opts, true);
  ingest->add_option("--out-dir", ingest_opts.out_dir, "output directory")
      ->required();

  MetricsOptions metrics_opts;
  auto* metrics = app.add_subcommand(
      "metrics", "compute the report CSVs from persisted intermediates");
  metrics->set_config("--config");
  metrics->add_option("--events", metrics_opts.events_path, "link-event log")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--edges", metrics_opts.edges_path, "first-seen edge list")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--btd-edges", metrics_opts.btd_edges_path,
                      "snapshot-derived edge list")
      ->check(CLI::ExistingFile);
  metrics->add_option("--announces", metrics_opts.announces_path,
                      "last-announce sidecar from ingest")
      ->check(CLI::ExistingFile);
  metrics->add_option(
      "--t-end", metrics_opts.t_end,
      "measurement window end (default: window.txt next to the event log, "
      "else the latest input time)");
  add_metrics_output_flags(metrics, metrics_opts);
  metrics->add_option("--out-dir", metrics_opts.out_dir, "output directory")
      ->required();

  DiffOptions diff_opts;
  auto* diff_cmd = app.add_subcommand("diff", "compare two edge lists");
  diff_cmd->set_config("--config");
  diff_cmd->add_option("--a", diff_opts.a_path, "first edge list")
      ->required()
      ->check(CLI::ExistingFile);
  diff_cmd->add_option("--b", diff_opts.b_path, "second edge list")
      ->required()
      ->check(CLI::ExistingFile);
  diff_cmd->add_option("--out-dir", diff_opts.out_dir, "output directory")
      ->required();

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand(
      "synth", "generate a ground-truth topology and update stream");
  synth->set_config("--config");
  synth->add_option("--nodes", synth_opts.cfg.node_count, "AS count")
      ->capture_default_str();
  synth->add_option("--exponent", synth_opts.cfg.degree_exponent,
                    "degree distribution exponent")
      ->capture_default_str();
  synth->add_option("--backup-fraction", synth_opts.cfg.backup_fraction,
                    "backup links per converged link")
      ->capture_default_str();
  synth->add_option("--events", synth_opts.cfg.event_count,
                    "stream size floor")
      ->capture_default_str();
  synth->add_option("--seed", synth_opts.cfg.seed, "generator seed")
      ->capture_default_str();
  synth->add_option("--t-start", synth_opts.cfg.t_start, "stream start time")
      ->capture_default_str();
  synth->add_option("--duration", synth_opts.cfg.duration,
                    "window length, seconds (0 = sized automatically)")
      ->capture_default_str();
  synth->add_option("--snapshot-at", synth_opts.snapshot_at,
                    "also dump the schedule's routes at these times");
  synth->add_option("--out-dir", synth_opts.out_dir, "output directory")
      ->required();

  IngestOptions report_ingest;
  MetricsOptions report_metrics;
  auto* report = app.add_subcommand(
      "report", "ingest and compute metrics in one pass");
  report->set_config("--config");
  add_ingest_flags(report, report_ingest, true);
  add_metrics_output_flags(report, report_metrics);
  report->add_option("--out-dir", report_ingest.out_dir, "output directory")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      run_ingest(ingest_opts);
      return 0;
    }
    if (*metrics) return cmd_metrics(metrics_opts);
    if (*diff_cmd) return cmd_diff(diff_opts);
    if (*synth) return cmd_synth(synth_opts);
    if (*report) return cmd_report(report_ingest, report_metrics);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
