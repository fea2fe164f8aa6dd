#pragma once
// Two-phase Louvain community detection on the weighted network, resolution
// 1.0. Node visiting order is the node index shuffled by the seeded RNG; all
// tie-breaks are deterministic, so a fixed seed gives a fixed partition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/network.hpp"
#include "devnet/rng.hpp"

namespace devnet {

/// Weighted modularity of a node->community assignment.
inline double modularity(const DevNetwork& net, const std::vector<int>& assign) {
  double m = 0.0;
  for (const auto& [k, w] : net.edges()) m += w.total();
  if (m == 0.0) return 0.0;
  std::map<int, double> intra, deg;
  for (const auto& [k, w] : net.edges()) {
    if (assign[static_cast<std::size_t>(k.first)] == assign[static_cast<std::size_t>(k.second)])
      intra[assign[static_cast<std::size_t>(k.first)]] += w.total();
  }
  for (int v = 0; v < static_cast<int>(net.node_count()); ++v)
    deg[assign[static_cast<std::size_t>(v)]] += net.strength(v);
  double q = 0.0;
  for (const auto& [c, d] : deg) {
    const double in = intra.count(c) ? intra[c] : 0.0;
    q += in / m - (d / (2.0 * m)) * (d / (2.0 * m));
  }
  return q;
}

inline double modularity(const DevNetwork& net, const std::vector<std::vector<int>>& communities) {
  std::vector<int> assign(net.node_count(), -1);
  for (std::size_t c = 0; c < communities.size(); ++c)
    for (int v : communities[c]) assign[static_cast<std::size_t>(v)] = static_cast<int>(c);
  return modularity(net, assign);
}

namespace detail {

struct LevelGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self loops
  std::vector<double> self_loop;
  std::vector<double> strength;  // neighbor weights + 2 * self loop
  double m = 0.0;                // total weight: each edge once + self loops
};

// One local-moving phase. Returns the number of communities and writes the
// compacted node->community assignment (communities renumbered by smallest
// member, which keeps later levels independent of visiting order).
inline int louvain_level(const LevelGraph& g, std::mt19937_64& rng, std::vector<int>& assign) {
  std::vector<int> order(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) order[static_cast<std::size_t>(i)] = i;
  seeded_shuffle(order, rng);

  assign.resize(static_cast<std::size_t>(g.n));
  std::vector<double> sigma_tot(static_cast<std::size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    assign[static_cast<std::size_t>(v)] = v;
    sigma_tot[static_cast<std::size_t>(v)] = g.strength[static_cast<std::size_t>(v)];
  }
  const double two_m = 2.0 * g.m;

  for (int pass = 0; pass < 64; ++pass) {
    bool moved = false;
    for (int v : order) {
      const int c_old = assign[static_cast<std::size_t>(v)];
      std::map<int, double> links;  // community -> weight from v (sorted => deterministic)
      for (const auto& [nb, w] : g.adj[static_cast<std::size_t>(v)])
        links[assign[static_cast<std::size_t>(nb)]] += w;
      sigma_tot[static_cast<std::size_t>(c_old)] -= g.strength[static_cast<std::size_t>(v)];

      auto gain = [&](int c) {
        const auto it = links.find(c);
        const double w_vc = it == links.end() ? 0.0 : it->second;
        return w_vc - sigma_tot[static_cast<std::size_t>(c)] *
                          g.strength[static_cast<std::size_t>(v)] / two_m;
      };
      int best_c = c_old;
      double best_gain = gain(c_old);
      for (const auto& [c, _] : links) {
        if (c == c_old) continue;
        const double gc = gain(c);
        if (gc > best_gain || (gc == best_gain && c < best_c)) {
          best_gain = gc;
          best_c = c;
        }
      }
      sigma_tot[static_cast<std::size_t>(best_c)] += g.strength[static_cast<std::size_t>(v)];
      assign[static_cast<std::size_t>(v)] = best_c;
      if (best_c != c_old) moved = true;
    }
    if (!moved) break;
  }

  // compact labels in order of smallest member
  std::vector<int> relabel(static_cast<std::size_t>(g.n), -1);
  int next = 0;
  for (int v = 0; v < g.n; ++v) {
    int& r = relabel[static_cast<std::size_t>(assign[static_cast<std::size_t>(v)])];
    if (r < 0) r = next++;
    assign[static_cast<std::size_t>(v)] = r;
  }
  return next;
}

inline LevelGraph aggregate(const LevelGraph& g, const std::vector<int>& assign, int communities) {
  LevelGraph next;
  next.n = communities;
  next.adj.resize(static_cast<std::size_t>(communities));
  next.self_loop.assign(static_cast<std::size_t>(communities), 0.0);
  next.strength.assign(static_cast<std::size_t>(communities), 0.0);
  next.m = g.m;

  std::map<std::pair<int, int>, double> edges;
  for (int v = 0; v < g.n; ++v) {
    const int cv = assign[static_cast<std::size_t>(v)];
    next.self_loop[static_cast<std::size_t>(cv)] += g.self_loop[static_cast<std::size_t>(v)];
    for (const auto& [nb, w] : g.adj[static_cast<std::size_t>(v)]) {
      if (nb < v) continue;  // undirected: visit each edge once
      const int cn = assign[static_cast<std::size_t>(nb)];
      if (cv == cn) {
        next.self_loop[static_cast<std::size_t>(cv)] += w;
      } else {
        edges[{std::min(cv, cn), std::max(cv, cn)}] += w;
      }
    }
  }
  for (const auto& [k, w] : edges) {
    next.adj[static_cast<std::size_t>(k.first)].emplace_back(k.second, w);
    next.adj[static_cast<std::size_t>(k.second)].emplace_back(k.first, w);
  }
  for (auto& adj : next.adj) std::sort(adj.begin(), adj.end());
  for (int c = 0; c < communities; ++c) {
    double s = 2.0 * next.self_loop[static_cast<std::size_t>(c)];
    for (const auto& [_, w] : next.adj[static_cast<std::size_t>(c)]) s += w;
    next.strength[static_cast<std::size_t>(c)] = s;
  }
  return next;
}

}  // namespace detail

/// Louvain partition as sorted node-index lists, largest community first
/// (ties by smallest member). Deterministic for a fixed seed.
inline std::vector<std::vector<int>> louvain_communities(const DevNetwork& net,
                                                         std::uint64_t seed) {
  const int n = static_cast<int>(net.node_count());
  if (n == 0) return {};

  std::vector<int> membership(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) membership[static_cast<std::size_t>(v)] = v;

  if (net.edge_count() > 0) {
    detail::LevelGraph g;
    g.n = n;
    g.adj.resize(static_cast<std::size_t>(n));
    g.self_loop.assign(static_cast<std::size_t>(n), 0.0);
    g.strength.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& [k, w] : net.edges()) {
      g.adj[static_cast<std::size_t>(k.first)].emplace_back(k.second, w.total());
      g.adj[static_cast<std::size_t>(k.second)].emplace_back(k.first, w.total());
      g.m += w.total();
    }
    for (auto& adj : g.adj) std::sort(adj.begin(), adj.end());
    for (int v = 0; v < n; ++v) g.strength[static_cast<std::size_t>(v)] = net.strength(v);

    std::mt19937_64 rng(seed);
    while (true) {
      std::vector<int> assign;
      const int communities = detail::louvain_level(g, rng, assign);
      for (auto& c : membership)
        c = assign[static_cast<std::size_t>(c)];
      if (communities == g.n) break;  // nothing merged at this level
      g = detail::aggregate(g, assign, communities);
    }
  }

  std::map<int, std::vector<int>> groups;
  for (int v = 0; v < n; ++v) groups[membership[static_cast<std::size_t>(v)]].push_back(v);
  std::vector<std::vector<int>> out;
  out.reserve(groups.size());
  for (auto& [_, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x.front() < y.front();
  });
  return out;
}

inline nlohmann::json communities_to_json(const DevNetwork& net,
                                          const std::vector<std::vector<int>>& communities,
                                          std::uint64_t seed) {
  nlohmann::json comms = nlohmann::json::array();
  for (const auto& c : communities) {
    nlohmann::json members = nlohmann::json::array();
    for (int v : c) members.push_back(net.name(v));
    comms.push_back(std::move(members));
  }
  return {{"communities", std::move(comms)}, {"count", communities.size()}, {"seed", seed}};
}

}  // namespace devnet
