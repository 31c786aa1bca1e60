#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "bgptopo/graph.hpp"
#include "bgptopo/types.hpp"

namespace bgptopo {

/// CCDF point: fraction of nodes with degree >= k, one point per
/// distinct observed degree.
struct CcdfPoint {
  std::size_t degree = 0;
  double fraction = 0.0;
  bool operator==(const CcdfPoint&) const = default;
};

std::vector<CcdfPoint> degree_ccdf(const AsGraph& g);  // throws on empty graph

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
  std::size_t points_used = 0;
};

/// Least-squares line over (log10 k, log10 fraction) using every point
/// with k > 0 and fraction > 0. Throws if fewer than three qualify.
PowerLawFit fit_powerlaw(std::span<const CcdfPoint> points);

/// Degree axes for joint-degree outputs: raw degrees, or log10 bins of
/// fixed width.
struct DegreeBinning {
  enum class Kind : std::uint8_t { Raw, Log10 };
  Kind kind = Kind::Log10;
  double width = 0.1;

  int index_of(std::size_t degree) const;
  /// log10-space coordinate the index stands for (axis value in CSVs).
  double axis_value(int index) const;
};

/// M(k1, k2): links joining nodes of degrees k1 <= k2, per bin.
struct DegreeDegreeMatrix {
  DegreeBinning binning;
  std::map<std::pair<int, int>, std::uint64_t> counts;

  std::uint64_t total() const;
};

/// Joint degree distribution of `subset`, with degrees taken from `g`
/// (pass the subgraph itself as `g` to bin by its own degrees).
/// Throws if a subset edge is not in g.
DegreeDegreeMatrix degree_degree(const AsGraph& g, std::span<const Link> subset,
                                 const DegreeBinning& binning = {});

/// Which graph supplies node degrees when two graphs are compared.
enum class DegreeSource : std::uint8_t { UnionGraph, OwnGraph };

/// Per-bin ratio of links in g_btd over links in g. Only g_btd edges
/// also present in g count toward the numerator; bins with a zero
/// denominator are omitted.
struct DegreeRatioMatrix {
  DegreeBinning binning;
  std::map<std::pair<int, int>, double> ratios;
};

DegreeRatioMatrix degree_ratio_matrix(
    const AsGraph& g_btd, const AsGraph& g, const DegreeBinning& binning = {},
    DegreeSource source = DegreeSource::UnionGraph);

/// Edge betweenness B(e): over unordered node pairs, the fraction of
/// shortest paths through e. Pairs in different components contribute
/// nothing. `threads` 0 picks a machine default; results are reduced
/// in a fixed chunk order, so output does not depend on thread count.
std::map<Link, double> edge_betweenness(const AsGraph& g, unsigned threads = 0);

// CSV emitters.
void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> points);
void write_fit_csv(std::ostream& out, const PowerLawFit& fit);
void write_degdeg_csv(std::ostream& out, const DegreeDegreeMatrix& m);
void write_ratio_csv(std::ostream& out, const DegreeRatioMatrix& m);
void write_betweenness_csv(std::ostream& out,
                           const std::map<Link, double>& betweenness);
void write_cumulative_csv(
    std::ostream& out,
    std::span<const std::pair<Timestamp, std::size_t>> series);

}  // namespace bgptopo
