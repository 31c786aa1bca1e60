#include "bgptopo/temporal.hpp"

#include "bgptopo/io_util.hpp"

namespace bgptopo {

TemporalStats compute_stats(const VisibilityTimeline& timeline, Timestamp t_end,
                            NlMode mode) {
  TemporalStats stats;
  stats.link = timeline.link;
  stats.first_seen = timeline.first_seen;

  const Timestamp window = t_end - timeline.first_seen;
  if (window <= 0) {
    // Seen only at the measurement boundary: visible for the whole of
    // an empty window.
    stats.np = 1.0;
    stats.nl = 1.0;
    return stats;
  }

  Timestamp visible = 0;
  for (const Interval& iv : timeline.intervals) visible += iv.end - iv.start;
  const Timestamp last = mode == NlMode::VisibleEnd ? timeline.last_visible
                                                    : timeline.last_announce;
  stats.np = static_cast<double>(visible) / static_cast<double>(window);
  stats.nl = static_cast<double>(last - timeline.first_seen) /
             static_cast<double>(window);
  return stats;
}

namespace {

std::size_t bucket_of(double np) {
  if (np <= 0.2) return 0;
  if (np < 0.8) return 1;
  return 2;
}

std::array<double, BucketTable::kBuckets> percentages(
    const std::array<std::uint64_t, BucketTable::kBuckets>& counts) {
  std::array<double, BucketTable::kBuckets> out{};
  std::uint64_t total = 0;
  for (const auto c : counts) total += c;
  if (total == 0) return out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    out[i] = 100.0 * static_cast<double>(counts[i]) /
             static_cast<double>(total);
  return out;
}

}  // namespace

std::array<double, BucketTable::kBuckets> BucketTable::in_btd_pct() const {
  return percentages(in_btd);
}

std::array<double, BucketTable::kBuckets> BucketTable::not_in_btd_pct() const {
  return percentages(not_in_btd);
}

BucketTable bucket_np(std::span<const TemporalStats> stats,
                      const std::set<Link>& btd_links) {
  BucketTable table;
  for (const TemporalStats& s : stats) {
    const std::size_t b = bucket_of(s.np);
    if (btd_links.contains(s.link))
      ++table.in_btd[b];
    else
      ++table.not_in_btd[b];
  }
  return table;
}

void write_temporal_csv(std::ostream& out,
                        std::span<const TemporalStats> stats) {
  out << "lo,hi,first_seen,np,nl\n";
  for (const TemporalStats& s : stats)
    out << s.link.lo << ',' << s.link.hi << ',' << s.first_seen << ','
        << format_double(s.np) << ',' << format_double(s.nl) << '\n';
}

void write_bucket_csv(std::ostream& out, const BucketTable& table) {
  static const char* kRanges[] = {"np<=0.2", "0.2<np<0.8", "np>=0.8"};
  const auto in_pct = table.in_btd_pct();
  const auto out_pct = table.not_in_btd_pct();
  out << "np_range,btd_count,btd_pct,extra_count,extra_pct\n";
  for (std::size_t i = 0; i < BucketTable::kBuckets; ++i)
    out << kRanges[i] << ',' << table.in_btd[i] << ','
        << format_double(in_pct[i]) << ',' << table.not_in_btd[i] << ','
        << format_double(out_pct[i]) << '\n';
}

}  // namespace bgptopo
