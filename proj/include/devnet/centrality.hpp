#pragma once
// The five centrality measures and their aggregation into a [0,1] rating.
// Shortest-path metrics treat collaboration strength as proximity: edge
// length defaults to 1/weight so heavily collaborating pairs sit close.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include "devnet/error.hpp"
#include "devnet/network.hpp"

namespace devnet {

enum class DistanceMode { InverseWeight, RawWeight };

inline double edge_length(double total_weight, DistanceMode mode) {
  return mode == DistanceMode::InverseWeight ? 1.0 / total_weight : total_weight;
}

namespace detail {

// Tie window for recognizing equal-length shortest paths; edge lengths are
// rationals with small denominators, orders of magnitude above this.
inline constexpr double kPathEps = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sssp {
  std::vector<double> dist;
  std::vector<double> sigma;              // number of shortest paths
  std::vector<std::vector<int>> preds;    // predecessors on shortest paths
  std::vector<int> order;                 // settle order (non-decreasing dist)
};

inline void dijkstra(const DevNetwork& net, int source, DistanceMode mode, bool with_paths,
                     Sssp& out) {
  const int n = static_cast<int>(net.node_count());
  out.dist.assign(static_cast<std::size_t>(n), kInf);
  if (with_paths) {
    out.sigma.assign(static_cast<std::size_t>(n), 0.0);
    out.preds.assign(static_cast<std::size_t>(n), {});
    out.order.clear();
  }
  std::vector<bool> settled(static_cast<std::size_t>(n), false);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  out.dist[static_cast<std::size_t>(source)] = 0.0;
  if (with_paths) out.sigma[static_cast<std::size_t>(source)] = 1.0;
  heap.push({0.0, source});

  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[static_cast<std::size_t>(u)]) continue;
    settled[static_cast<std::size_t>(u)] = true;
    if (with_paths) out.order.push_back(u);
    for (const auto& [v, w] : net.neighbors(u)) {
      const double nd = d + edge_length(w, mode);
      double& dv = out.dist[static_cast<std::size_t>(v)];
      if (nd < dv - kPathEps) {
        dv = nd;
        if (with_paths) {
          out.sigma[static_cast<std::size_t>(v)] = out.sigma[static_cast<std::size_t>(u)];
          out.preds[static_cast<std::size_t>(v)] = {u};
        }
        heap.push({nd, v});
      } else if (with_paths && nd <= dv + kPathEps && !settled[static_cast<std::size_t>(v)]) {
        out.sigma[static_cast<std::size_t>(v)] += out.sigma[static_cast<std::size_t>(u)];
        out.preds[static_cast<std::size_t>(v)].push_back(u);
      }
    }
  }
}

// Runs per_block(block_index, first, last) over fixed-size source blocks on
// up to `threads` workers. Block decomposition is independent of the thread
// count, so any reduction done in block order is thread-count invariant.
template <typename Fn>
void run_blocked(int n, int threads, Fn per_block) {
  constexpr int kBlock = 64;
  const int blocks = (n + kBlock - 1) / kBlock;
  threads = std::max(1, std::min(threads, blocks));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      per_block(b, b * kBlock, std::min(n, (b + 1) * kBlock));
    }
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Unweighted degree centrality: deg(v) / (n - 1). All zero below 2 nodes.
inline std::vector<double> degree_centrality(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (n < 2) return out;
  for (int v = 0; v < n; ++v)
    out[static_cast<std::size_t>(v)] = static_cast<double>(net.degree(v)) / (n - 1);
  return out;
}

/// Strength-based variant: sum of incident edge weights / (n - 1).
inline std::vector<double> weighted_degree_centrality(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (n < 2) return out;
  for (int v = 0; v < n; ++v) out[static_cast<std::size_t>(v)] = net.strength(v) / (n - 1);
  return out;
}

/// Closeness with the Wasserman-Faust correction for disconnected graphs:
/// (|R| / sum of distances to R) * (|R| / (n - 1)), R the reachable set.
inline std::vector<double> closeness_centrality(const DevNetwork& net,
                                                DistanceMode mode = DistanceMode::InverseWeight,
                                                int threads = 1) {
  const int n = static_cast<int>(net.node_count());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (n < 2) return out;
  detail::run_blocked(n, threads, [&](int, int first, int last) {
    detail::Sssp sp;
    for (int s = first; s < last; ++s) {
      detail::dijkstra(net, s, mode, /*with_paths=*/false, sp);
      double sum = 0.0;
      std::int64_t reachable = 0;
      for (int v = 0; v < n; ++v) {
        if (v == s || sp.dist[static_cast<std::size_t>(v)] == detail::kInf) continue;
        sum += sp.dist[static_cast<std::size_t>(v)];
        ++reachable;
      }
      if (reachable > 0 && sum > 0.0) {
        const double r = static_cast<double>(reachable);
        out[static_cast<std::size_t>(s)] = (r / sum) * (r / (n - 1));
      }
    }
  });
  return out;
}

/// Brandes betweenness on weighted shortest paths, endpoints excluded,
/// fractional credit across equal-length paths. `normalized` applies the
/// 2/((n-1)(n-2)) scaling and yields all zeros below 3 nodes.
inline std::vector<double> betweenness_centrality(const DevNetwork& net,
                                                  DistanceMode mode = DistanceMode::InverseWeight,
                                                  bool normalized = true, int threads = 1) {
  const int n = static_cast<int>(net.node_count());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (n < 2 || (normalized && n < 3)) return out;

  constexpr int kBlock = 64;
  const int blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(blocks));
  detail::run_blocked(n, threads, [&](int block, int first, int last) {
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    detail::Sssp sp;
    std::vector<double> delta(static_cast<std::size_t>(n));
    for (int s = first; s < last; ++s) {
      detail::dijkstra(net, s, mode, /*with_paths=*/true, sp);
      std::fill(delta.begin(), delta.end(), 0.0);
      for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
        const int w = *it;
        for (int v : sp.preds[static_cast<std::size_t>(w)]) {
          delta[static_cast<std::size_t>(v)] +=
              sp.sigma[static_cast<std::size_t>(v)] / sp.sigma[static_cast<std::size_t>(w)] *
              (1.0 + delta[static_cast<std::size_t>(w)]);
        }
        if (w != s) acc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
      }
    }
    partial[static_cast<std::size_t>(block)] = std::move(acc);
  });
  for (const auto& acc : partial) {
    for (int v = 0; v < n; ++v) out[static_cast<std::size_t>(v)] += acc[static_cast<std::size_t>(v)];
  }

  // each unordered pair was accumulated from both endpoints
  double scale = 0.5;
  if (normalized) scale *= 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (auto& v : out) v *= scale;
  return out;
}

/// Dominant eigenvector of the weighted adjacency matrix, computed on the
/// largest component and 0 elsewhere. Power iteration runs on A + I, which
/// has the same eigenvectors with a strictly dominant leading eigenvalue.
/// L2-normalized, entries >= 0. Throws AnalysisError on non-convergence.
inline std::vector<double> eigenvector_centrality(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  if (net.edge_count() == 0) return out;  // callers surface the warning

  const auto comps = components(net);
  const auto& comp = comps.front();
  const int k = static_cast<int>(comp.size());
  const double tol = 1e-6 / k;
  constexpr int kMaxIter = 1000;

  std::vector<double> x(static_cast<std::size_t>(k), 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < k; ++i) local[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] = i;

  std::vector<double> y(static_cast<std::size_t>(k));
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    for (int i = 0; i < k; ++i) {
      double acc = x[static_cast<std::size_t>(i)];  // the +I term
      for (const auto& [nb, w] : net.neighbors(comp[static_cast<std::size_t>(i)]))
        acc += w * x[static_cast<std::size_t>(local[static_cast<std::size_t>(nb)])];
      y[static_cast<std::size_t>(i)] = acc;
    }
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (int i = 0; i < k; ++i) {
      y[static_cast<std::size_t>(i)] /= norm;
      change = std::max(change,
                        std::abs(y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]));
    }
    x.swap(y);
    if (change < tol) {
      for (int i = 0; i < k; ++i)
        out[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])] =
            x[static_cast<std::size_t>(i)];
      return out;
    }
  }
  throw AnalysisError("eigenvector centrality did not converge after " +
                      std::to_string(kMaxIter) + " iterations");
}

/// Weighted PageRank, damping 0.85; dangling nodes teleport uniformly.
/// Converges when the L1 change drops below 1e-8; values sum to 1.
inline std::vector<double> pagerank(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  if (n == 0) return {};
  constexpr double kAlpha = 0.85;
  constexpr double kTol = 1e-8;
  constexpr int kMaxIter = 200;

  std::vector<double> strength(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) strength[static_cast<std::size_t>(v)] = net.strength(v);

  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> next(static_cast<std::size_t>(n));
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v)
      if (strength[static_cast<std::size_t>(v)] == 0.0) dangling += x[static_cast<std::size_t>(v)];
    const double base = (1.0 - kAlpha) / n + kAlpha * dangling / n;
    for (int v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const auto& [u, w] : net.neighbors(v))
        acc += x[static_cast<std::size_t>(u)] * w / strength[static_cast<std::size_t>(u)];
      next[static_cast<std::size_t>(v)] = base + kAlpha * acc;
    }
    double l1 = 0.0;
    for (int v = 0; v < n; ++v)
      l1 += std::abs(next[static_cast<std::size_t>(v)] - x[static_cast<std::size_t>(v)]);
    x.swap(next);
    if (l1 < kTol) return x;
  }
  throw AnalysisError("pagerank did not converge after " + std::to_string(kMaxIter) +
                      " iterations");
}

// ---------------------------------------------------------------------------
// Aggregation into the developer rating.

struct MetricSet {
  std::vector<std::string> developers;  // node order
  std::vector<double> degree, closeness, betweenness, eigenvector, pagerank;
};

struct CentralityVector {
  std::string developer;
  double degree = 0, closeness = 0, betweenness = 0, eigenvector = 0, pagerank = 0;
  double n_degree = 0, n_closeness = 0, n_betweenness = 0, n_eigenvector = 0, n_pagerank = 0;
  double rating = 0;
};

struct MetricOptions {
  DistanceMode distance = DistanceMode::InverseWeight;
  bool weighted_degree = false;
  int threads = 1;
};

inline MetricSet compute_metrics(const DevNetwork& net, const MetricOptions& opt = {}) {
  MetricSet m;
  m.developers = net.nodes();
  m.degree = opt.weighted_degree ? weighted_degree_centrality(net) : degree_centrality(net);
  m.closeness = closeness_centrality(net, opt.distance, opt.threads);
  m.betweenness = betweenness_centrality(net, opt.distance, true, opt.threads);
  m.eigenvector = eigenvector_centrality(net);
  m.pagerank = pagerank(net);
  return m;
}

namespace detail {

// min-max normalization; a metric with max == min carries no ranking
// information and maps to all zeros
inline std::vector<double> min_max(const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*hi == *lo) return out;
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  return out;
}

}  // namespace detail

/// Min-max normalizes each metric across developers, sums the five, and
/// min-max normalizes the sums into the final rating.
inline std::vector<CentralityVector> aggregate_ratings(const MetricSet& m) {
  const std::size_t n = m.developers.size();
  for (const auto* v : {&m.degree, &m.closeness, &m.betweenness, &m.eigenvector, &m.pagerank}) {
    if (v->size() != n)
      throw AnalysisError("centrality metrics cover different developer sets");
  }
  const auto nd = detail::min_max(m.degree);
  const auto nc = detail::min_max(m.closeness);
  const auto nb = detail::min_max(m.betweenness);
  const auto ne = detail::min_max(m.eigenvector);
  const auto np = detail::min_max(m.pagerank);

  std::vector<double> sums(n);
  for (std::size_t i = 0; i < n; ++i) sums[i] = nd[i] + nc[i] + nb[i] + ne[i] + np[i];
  const auto ratings = detail::min_max(sums);

  std::vector<CentralityVector> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CentralityVector& cv = out[i];
    cv.developer = m.developers[i];
    cv.degree = m.degree[i];
    cv.closeness = m.closeness[i];
    cv.betweenness = m.betweenness[i];
    cv.eigenvector = m.eigenvector[i];
    cv.pagerank = m.pagerank[i];
    cv.n_degree = nd[i];
    cv.n_closeness = nc[i];
    cv.n_betweenness = nb[i];
    cv.n_eigenvector = ne[i];
    cv.n_pagerank = np[i];
    cv.rating = ratings[i];
  }
  return out;
}

}  // namespace devnet
