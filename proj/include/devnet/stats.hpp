#pragma once
// Structural overview of a developer network: counts, density, clustering,
// largest-component path length, and Louvain community counts.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/louvain.hpp"
#include "devnet/network.hpp"

namespace devnet {

struct NetworkStats {
  std::uint64_t node_count = 0;
  std::uint64_t edge_count = 0;
  std::uint64_t component_count = 0;
  std::uint64_t isolate_count = 0;
  double density = 0.0;
  double avg_clustering = 0.0;
  struct {
    std::uint64_t node_count = 0;
    std::uint64_t edge_count = 0;
    std::optional<double> avg_shortest_path_hops;  // undefined below 2 nodes
  } largest_component;
  std::uint64_t community_count = 0;
  std::uint64_t large_community_count = 0;  // communities with >= 100 nodes
  std::uint64_t seed = 0;
};

inline NetworkStats compute_stats(const DevNetwork& net, std::uint64_t seed) {
  NetworkStats s;
  s.seed = seed;
  s.node_count = net.node_count();
  s.edge_count = net.edge_count();
  const double n = static_cast<double>(s.node_count);
  s.density = s.node_count >= 2 ? 2.0 * static_cast<double>(s.edge_count) / (n * (n - 1.0)) : 0.0;
  s.avg_clustering = avg_clustering(net);

  const auto comps = components(net);
  s.component_count = comps.size();
  for (int v = 0; v < static_cast<int>(net.node_count()); ++v)
    if (net.degree(v) == 0) ++s.isolate_count;

  if (!comps.empty()) {
    const auto& largest = comps.front();
    s.largest_component.node_count = largest.size();
    std::uint64_t edges_within = 0;
    for (const auto& [k, w] : net.edges()) {
      // both endpoints of an edge share a component
      if (std::binary_search(largest.begin(), largest.end(), k.first)) ++edges_within;
    }
    s.largest_component.edge_count = edges_within;
    if (largest.size() >= 2)
      s.largest_component.avg_shortest_path_hops = avg_shortest_path_hops(net, largest);
  }

  const auto communities = louvain_communities(net, seed);
  s.community_count = communities.size();
  for (const auto& c : communities)
    if (c.size() >= 100) ++s.large_community_count;
  return s;
}

inline nlohmann::json to_json(const NetworkStats& s) {
  nlohmann::json largest{{"edge_count", s.largest_component.edge_count},
                         {"node_count", s.largest_component.node_count}};
  if (s.largest_component.avg_shortest_path_hops) {
    largest["avg_shortest_path_hops"] = *s.largest_component.avg_shortest_path_hops;
  } else {
    largest["avg_shortest_path_hops"] = nullptr;
  }
  return {{"avg_clustering", s.avg_clustering},
          {"community_count", s.community_count},
          {"component_count", s.component_count},
          {"density", s.density},
          {"edge_count", s.edge_count},
          {"isolate_count", s.isolate_count},
          {"large_community_count", s.large_community_count},
          {"largest_component", std::move(largest)},
          {"node_count", s.node_count},
          {"seed", s.seed}};
}

/// Plain-text rendering for terminal use.
inline std::string to_table(const NetworkStats& s) {
  auto line = [](const std::string& k, const std::string& v) {
    std::string out = k;
    out.append(out.size() < 34 ? 34 - out.size() : 1, ' ');
    return out + v + "\n";
  };
  std::string out;
  out += line("Nodes", std::to_string(s.node_count));
  out += line("Edges", std::to_string(s.edge_count));
  out += line("Components", std::to_string(s.component_count));
  out += line("Isolates", std::to_string(s.isolate_count));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", s.density);
  out += line("Network density", buf);
  std::snprintf(buf, sizeof(buf), "%.6f", s.avg_clustering);
  out += line("Avg. clustering coefficient", buf);
  out += line("Total communities", std::to_string(s.community_count));
  out += line("Communities with >= 100 nodes", std::to_string(s.large_community_count));
  out += line("Largest component nodes", std::to_string(s.largest_component.node_count));
  out += line("Largest component edges", std::to_string(s.largest_component.edge_count));
  if (s.largest_component.avg_shortest_path_hops) {
    std::snprintf(buf, sizeof(buf), "%.6f", *s.largest_component.avg_shortest_path_hops);
    out += line("Avg. shortest path length", buf);
  } else {
    out += line("Avg. shortest path length", "undefined");
  }
  return out;
}

}  // namespace devnet
