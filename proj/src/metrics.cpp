#include "bgptopo/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "bgptopo/io_util.hpp"

namespace bgptopo {

std::vector<CcdfPoint> degree_ccdf(const AsGraph& g) {
  auto degs = g.degrees();
  if (degs.empty()) throw Error("degree_ccdf: empty graph");
  // Count nodes per distinct degree, then walk degrees descending so the
  // running sum is |{v : deg(v) >= k}|.
  std::map<std::size_t, std::size_t> hist;
  for (const auto& [node, d] : degs) ++hist[d];
  const double n = static_cast<double>(degs.size());
  std::vector<CcdfPoint> points;
  points.reserve(hist.size());
  std::size_t at_least = 0;
  for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
    at_least += it->second;
    points.push_back({it->first, static_cast<double>(at_least) / n});
  }
  std::reverse(points.begin(), points.end());
  return points;  // ascending degree; smallest degree has fraction 1
}

PowerLawFit fit_powerlaw(std::span<const CcdfPoint> points) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : points) {
    if (p.degree > 0 && p.fraction > 0.0)
      xy.emplace_back(std::log10(static_cast<double>(p.degree)),
                      std::log10(p.fraction));
  }
  if (xy.size() < 3)
    throw Error("fit_powerlaw: need at least 3 usable points, have " +
                std::to_string(xy.size()));
  const double n = static_cast<double>(xy.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cov = sxy - sx * sy / n;
  if (vx <= 0.0) throw Error("fit_powerlaw: degenerate x range");
  PowerLawFit fit;
  fit.slope = cov / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  // vy == 0 means a perfectly flat line; correlation is undefined, call it 0.
  fit.pearson_r = vy > 0.0 ? cov / std::sqrt(vx * vy) : 0.0;
  fit.points_used = xy.size();
  return fit;
}

int DegreeBinning::index_of(std::size_t degree) const {
  if (degree == 0) throw Error("degree binning: zero degree");
  if (kind == Kind::Raw) return static_cast<int>(degree);
  // Nudge before floor so exact decade boundaries land in the bin they
  // start (log10(10)/0.1 can evaluate to 9.9999...).
  const double v = std::log10(static_cast<double>(degree)) / width;
  return static_cast<int>(std::floor(v + 1e-9));
}

double DegreeBinning::axis_value(int index) const {
  if (kind == Kind::Raw) return std::log10(static_cast<double>(index));
  return static_cast<double>(index) * width;  // lower edge, log10 space
}

std::uint64_t DegreeDegreeMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& [bin, count] : counts) sum += count;
  return sum;
}

DegreeDegreeMatrix degree_degree(const AsGraph& g, std::span<const Link> subset,
                                 const DegreeBinning& binning) {
  auto degs = g.degrees();
  DegreeDegreeMatrix m;
  m.binning = binning;
  for (const Link& link : subset) {
    if (!g.edges().contains(link))
      throw Error("degree_degree: link " + std::to_string(link.lo) + "-" +
                  std::to_string(link.hi) + " not in graph");
    int a = binning.index_of(degs.at(link.lo));
    int b = binning.index_of(degs.at(link.hi));
    if (a > b) std::swap(a, b);
    ++m.counts[{a, b}];
  }
  return m;
}

DegreeRatioMatrix degree_ratio_matrix(const AsGraph& g_btd, const AsGraph& g,
                                      const DegreeBinning& binning,
                                      DegreeSource source) {
  // Numerator counts only links both graphs contain, so in UnionGraph
  // mode every numerator bin also appears in the denominator and each
  // ratio lands in [0, 1].
  std::vector<Link> shared;
  for (const auto& [link, ts] : g_btd.edges())
    if (g.edges().contains(link)) shared.push_back(link);

  std::vector<Link> all;
  all.reserve(g.edges().size());
  for (const auto& [link, ts] : g.edges()) all.push_back(link);

  const AsGraph& num_graph = source == DegreeSource::UnionGraph ? g : g_btd;
  DegreeDegreeMatrix num = degree_degree(num_graph, shared, binning);
  DegreeDegreeMatrix den = degree_degree(g, all, binning);

  DegreeRatioMatrix r;
  r.binning = binning;
  for (const auto& [bin, den_count] : den.counts) {
    auto it = num.counts.find(bin);
    const std::uint64_t num_count = it == num.counts.end() ? 0 : it->second;
    r.ratios[bin] =
        static_cast<double>(num_count) / static_cast<double>(den_count);
  }
  return r;
}

namespace {

// Flattened graph for traversal: nodes renumbered 0..n-1, adjacency in
// CSR form with the owning edge's index alongside each neighbor.
struct Csr {
  std::vector<AsNum> node_of;
  std::vector<std::size_t> row;     // n+1 offsets
  std::vector<std::uint32_t> col;   // neighbor node index
  std::vector<std::uint32_t> edge;  // index into edge order
  std::vector<Link> links;          // edge order = AsGraph map order
};

Csr build_csr(const AsGraph& g) {
  Csr c;
  std::map<AsNum, std::uint32_t> index;
  for (AsNum node : g.nodes()) {
    index.emplace(node, static_cast<std::uint32_t>(c.node_of.size()));
    c.node_of.push_back(node);
  }
  const std::size_t n = c.node_of.size();
  std::vector<std::size_t> deg(n, 0);
  for (const auto& [link, ts] : g.edges()) {
    ++deg[index.at(link.lo)];
    ++deg[index.at(link.hi)];
    c.links.push_back(link);
  }
  c.row.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) c.row[i + 1] = c.row[i] + deg[i];
  c.col.resize(c.row[n]);
  c.edge.resize(c.row[n]);
  std::vector<std::size_t> fill(c.row.begin(), c.row.end() - 1);
  for (std::uint32_t e = 0; e < c.links.size(); ++e) {
    const std::uint32_t u = index.at(c.links[e].lo);
    const std::uint32_t v = index.at(c.links[e].hi);
    c.col[fill[u]] = v;
    c.edge[fill[u]++] = e;
    c.col[fill[v]] = u;
    c.edge[fill[v]++] = e;
  }
  return c;
}

// Shortest-path dependency accumulation from one source (Brandes,
// edge variant). Adds each edge's dependency for this source to
// `score`. Scratch buffers are caller-owned so a worker can reuse them.
struct BfsScratch {
  std::vector<std::int32_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<std::uint32_t> order;
};

void accumulate_from_source(const Csr& c, std::uint32_t s, BfsScratch& t,
                            std::vector<double>& score) {
  const std::size_t n = c.node_of.size();
  t.dist.assign(n, -1);
  t.sigma.assign(n, 0.0);
  t.delta.assign(n, 0.0);
  t.order.clear();
  t.dist[s] = 0;
  t.sigma[s] = 1.0;
  t.order.push_back(s);
  for (std::size_t head = 0; head < t.order.size(); ++head) {
    const std::uint32_t u = t.order[head];
    for (std::size_t i = c.row[u]; i < c.row[u + 1]; ++i) {
      const std::uint32_t v = c.col[i];
      if (t.dist[v] < 0) {
        t.dist[v] = t.dist[u] + 1;
        t.order.push_back(v);
      }
      if (t.dist[v] == t.dist[u] + 1) t.sigma[v] += t.sigma[u];
    }
  }
  // Walk discovery order backwards; every neighbor one level closer is a
  // predecessor on some shortest path.
  for (std::size_t pos = t.order.size(); pos-- > 1;) {
    const std::uint32_t w = t.order[pos];
    for (std::size_t i = c.row[w]; i < c.row[w + 1]; ++i) {
      const std::uint32_t v = c.col[i];
      if (t.dist[v] != t.dist[w] - 1) continue;
      const double contrib = t.sigma[v] / t.sigma[w] * (1.0 + t.delta[w]);
      score[c.edge[i]] += contrib;
      t.delta[v] += contrib;
    }
  }
}

}  // namespace

std::map<Link, double> edge_betweenness(const AsGraph& g, unsigned threads) {
  const Csr c = build_csr(g);
  const std::size_t n = c.node_of.size();
  const std::size_t m = c.links.size();
  if (n == 0) return {};

  // Sources are split into fixed chunks and partial scores reduced in
  // chunk order, so totals are bit-identical for any thread count.
  const std::size_t chunks = std::min<std::size_t>(n, 64);
  std::vector<std::vector<double>> partial(chunks);

  unsigned want = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (want == 0) want = 1;
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(want, chunks));

  std::atomic<std::size_t> next_chunk{0};
  auto run = [&]() {
    BfsScratch scratch;
    for (;;) {
      const std::size_t chunk = next_chunk.fetch_add(1);
      if (chunk >= chunks) break;
      const std::size_t lo = chunk * n / chunks;
      const std::size_t hi = (chunk + 1) * n / chunks;
      auto& score = partial[chunk];
      score.assign(m, 0.0);
      for (std::size_t s = lo; s < hi; ++s)
        accumulate_from_source(c, static_cast<std::uint32_t>(s), scratch,
                               score);
    }
  };

  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  std::vector<double> score(m, 0.0);
  for (const auto& part : partial)
    for (std::size_t e = 0; e < part.size(); ++e) score[e] += part[e];

  std::map<Link, double> result;
  for (std::size_t e = 0; e < m; ++e)
    result.emplace(c.links[e], score[e] / 2.0);  // each pair seen from both ends
  return result;
}

void write_ccdf_csv(std::ostream& out, std::span<const CcdfPoint> points) {
  out << "degree,fraction\n";
  for (const auto& p : points)
    out << p.degree << ',' << format_double(p.fraction) << '\n';
}

void write_fit_csv(std::ostream& out, const PowerLawFit& fit) {
  out << "slope,intercept,pearson_r,points_used\n";
  out << format_double(fit.slope) << ',' << format_double(fit.intercept) << ','
      << format_double(fit.pearson_r) << ',' << fit.points_used << '\n';
}

void write_degdeg_csv(std::ostream& out, const DegreeDegreeMatrix& m) {
  out << "bin_x,bin_y,log10_count\n";
  for (const auto& [bin, count] : m.counts)
    out << format_double(m.binning.axis_value(bin.first)) << ','
        << format_double(m.binning.axis_value(bin.second)) << ','
        << format_double(std::log10(static_cast<double>(count))) << '\n';
}

void write_ratio_csv(std::ostream& out, const DegreeRatioMatrix& m) {
  out << "bin_x,bin_y,ratio\n";
  for (const auto& [bin, ratio] : m.ratios)
    out << format_double(m.binning.axis_value(bin.first)) << ','
        << format_double(m.binning.axis_value(bin.second)) << ','
        << format_double(ratio) << '\n';
}

void write_betweenness_csv(std::ostream& out,
                           const std::map<Link, double>& betweenness) {
  out << "lo,hi,betweenness\n";
  for (const auto& [link, value] : betweenness)
    out << link.lo << ',' << link.hi << ',' << format_double(value) << '\n';
}

void write_cumulative_csv(
    std::ostream& out,
    std::span<const std::pair<Timestamp, std::size_t>> series) {
  out << "ts,links\n";
  for (const auto& [ts, count] : series) out << ts << ',' << count << '\n';
}

}  // namespace bgptopo
