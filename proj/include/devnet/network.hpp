#pragma once
// The developer network: an undirected weighted graph collapsed from
// collaboration instances. Immutable after construction; node_index is the
// lexicographic order of developer identifiers.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/collab.hpp"
#include "devnet/error.hpp"

namespace devnet {

struct EdgeWeight {
  std::uint32_t co_edition = 0;
  std::uint32_t review = 0;

  std::uint32_t total() const { return co_edition + review; }
  bool operator==(const EdgeWeight&) const = default;
};

class DevNetwork {
 public:
  DevNetwork() = default;

  /// Collapses instances into edge weights. Optional roster adds developers
  /// seen in events but without collaborations (the isolates).
  static DevNetwork from_instances(const std::vector<CollaborationInstance>& instances,
                                   const std::vector<std::string>& roster = {}) {
    std::set<std::string> names(roster.begin(), roster.end());
    for (const auto& inst : instances) {
      if (inst.a == inst.b)
        throw AnalysisError("instance with a == b reached network construction: " + inst.a);
      names.insert(inst.a);
      names.insert(inst.b);
    }
    DevNetwork net;
    net.nodes_.assign(names.begin(), names.end());
    net.build_index();
    for (const auto& inst : instances) {
      auto& w = net.edges_[net.key(net.index_.at(inst.a), net.index_.at(inst.b))];
      if (inst.kind == CollabKind::FileCoEdition) {
        ++w.co_edition;
      } else {
        ++w.review;
      }
    }
    net.build_adjacency();
    return net;
  }

  static DevNetwork from_edges(
      std::vector<std::string> extra_nodes,
      const std::vector<std::tuple<std::string, std::string, EdgeWeight>>& edges) {
    std::set<std::string> names(extra_nodes.begin(), extra_nodes.end());
    for (const auto& [a, b, w] : edges) {
      names.insert(a);
      names.insert(b);
    }
    DevNetwork net;
    net.nodes_.assign(names.begin(), names.end());
    net.build_index();
    for (const auto& [a, b, w] : edges) {
      if (a == b) throw AnalysisError("self-loop edge rejected: " + a);
      if (w.total() == 0) throw AnalysisError("zero-weight edge rejected: " + a + "-" + b);
      auto& dst = net.edges_[net.key(net.index_.at(a), net.index_.at(b))];
      dst.co_edition += w.co_edition;
      dst.review += w.review;
    }
    net.build_adjacency();
    return net;
  }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(int v) const { return nodes_[static_cast<std::size_t>(v)]; }

  int index_of(const std::string& dev) const {
    auto it = index_.find(dev);
    return it == index_.end() ? -1 : it->second;
  }

  /// Edges keyed by (min index, max index); iteration order is canonical.
  const std::map<std::pair<int, int>, EdgeWeight>& edges() const { return edges_; }

  const EdgeWeight* edge(int u, int v) const {
    auto it = edges_.find(key(u, v));
    return it == edges_.end() ? nullptr : &it->second;
  }

  /// Neighbors with total edge weight, sorted by neighbor index.
  std::span<const std::pair<int, double>> neighbors(int v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

  std::size_t degree(int v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }

  double strength(int v) const {
    double s = 0;
    for (const auto& [_, w] : adjacency_[static_cast<std::size_t>(v)]) s += w;
    return s;
  }

 private:
  static std::pair<int, int> key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

  void build_index() {
    index_.reserve(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i]] = static_cast<int>(i);
  }

  void build_adjacency() {
    adjacency_.assign(nodes_.size(), {});
    for (const auto& [k, w] : edges_) {
      adjacency_[static_cast<std::size_t>(k.first)].emplace_back(k.second, w.total());
      adjacency_[static_cast<std::size_t>(k.second)].emplace_back(k.first, w.total());
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  std::vector<std::string> nodes_;  // sorted; position == node_index
  std::unordered_map<std::string, int> index_;
  std::map<std::pair<int, int>, EdgeWeight> edges_;
  std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

/// Connected components as sorted index lists, largest first; equal sizes
/// order by smallest member.
inline std::vector<std::vector<int>> components(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp{s};
    seen[static_cast<std::size_t>(s)] = true;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& [v, _] : net.neighbors(u)) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          comp.push_back(v);
          q.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x.front() < y.front();
  });
  return comps;
}

/// Mean unweighted local clustering coefficient; degree-<2 nodes contribute 0.
inline double avg_clustering(const DevNetwork& net) {
  const int n = static_cast<int>(net.node_count());
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (int v = 0; v < n; ++v) {
    const auto nbrs = net.neighbors(v);
    const std::size_t deg = nbrs.size();
    if (deg < 2) continue;
    std::uint64_t triangles = 0;
    for (std::size_t i = 0; i < deg; ++i) {
      for (std::size_t j = i + 1; j < deg; ++j) {
        if (net.edge(nbrs[i].first, nbrs[j].first) != nullptr) ++triangles;
      }
    }
    sum += static_cast<double>(2 * triangles) / (static_cast<double>(deg) * (deg - 1));
  }
  return sum / n;
}

/// Mean hop distance over unordered pairs of `within`, which must be a
/// connected set of >= 2 nodes.
inline double avg_shortest_path_hops(const DevNetwork& net, const std::vector<int>& within) {
  if (within.size() < 2)
    throw AnalysisError("average shortest path undefined: fewer than 2 nodes");
  const int n = static_cast<int>(net.node_count());
  std::vector<bool> member(static_cast<std::size_t>(n), false);
  for (int v : within) member[static_cast<std::size_t>(v)] = true;

  std::uint64_t total_hops = 0;
  std::vector<int> dist(static_cast<std::size_t>(n));
  for (int s : within) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    std::queue<int> q;
    q.push(s);
    std::size_t reached = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& [v, _] : net.neighbors(u)) {
        if (!member[static_cast<std::size_t>(v)] || dist[static_cast<std::size_t>(v)] >= 0)
          continue;
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        total_hops += static_cast<std::uint64_t>(dist[static_cast<std::size_t>(v)]);
        ++reached;
        q.push(v);
      }
    }
    if (reached != within.size())
      throw AnalysisError("average shortest path undefined: node set is disconnected");
  }
  const auto pairs = static_cast<double>(within.size()) * (static_cast<double>(within.size()) - 1);
  return static_cast<double>(total_hops) / pairs;  // each pair counted twice
}

// ---------------------------------------------------------------------------
// Persistence. Canonical form: nodes sorted, edges sorted by (a, b) with
// a < b; the serialization is byte-stable across runs.

inline nlohmann::json to_json(const DevNetwork& net) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [k, w] : net.edges()) {
    edges.push_back({{"a", net.name(k.first)},
                     {"b", net.name(k.second)},
                     {"co_edition", w.co_edition},
                     {"review", w.review}});
  }
  return {{"edges", std::move(edges)}, {"nodes", net.nodes()}};
}

inline DevNetwork network_from_json(const nlohmann::json& j, const std::string& source_name) {
  if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
    throw IoError("graph file missing nodes/edges: " + source_name);
  try {
    std::vector<std::tuple<std::string, std::string, EdgeWeight>> edges;
    for (const auto& e : j.at("edges")) {
      EdgeWeight w{e.at("co_edition").get<std::uint32_t>(), e.at("review").get<std::uint32_t>()};
      edges.emplace_back(e.at("a").get<std::string>(), e.at("b").get<std::string>(), w);
    }
    return DevNetwork::from_edges(j.at("nodes").get<std::vector<std::string>>(), edges);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed graph file " + source_name + ": " + e.what());
  }
}

inline void save_network(const std::string& path, const DevNetwork& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write graph file: " + path);
  out << to_json(net).dump() << '\n';
}

inline DevNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("graph file is not valid JSON: " + path);
  return network_from_json(j, path);
}

}  // namespace devnet
