#pragma once
// End-to-end orchestration: events -> instances -> network -> stats,
// communities, ratings and histogram. Output is a pure function of the
// inputs and the seed; any stage failure removes partial outputs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/centrality.hpp"
#include "devnet/collab.hpp"
#include "devnet/error.hpp"
#include "devnet/events.hpp"
#include "devnet/louvain.hpp"
#include "devnet/network.hpp"
#include "devnet/rating.hpp"
#include "devnet/stats.hpp"
#include "devnet/version.hpp"

namespace devnet {

struct PipelineConfig {
  std::vector<std::string> event_paths;
  std::string output_dir;
  std::uint64_t seed = 42;
  int window_days = kDefaultWindowDays;
  DistanceMode distance = DistanceMode::InverseWeight;
  bool weighted_degree = false;
  // "" = collaboration-only graph; "auto" = roster derived from the events;
  // anything else = path to a roster file (JSON array or activity object)
  std::string include_isolates;
  int bins = 20;
  int threads = 1;
  bool quiet = false;
};

namespace detail {

inline std::uint64_t fnv1a64(std::istream& in) {
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  do {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  } while (in);
  return h;
}

inline std::string fnv1a64_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(in)));
  return buf;
}

// Tracks files written by one pipeline run and removes them unless the run
// reaches commit().
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  ~ArtifactSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write artifact: " + path.string());
    written_.push_back(path);
    return out;
  }

  void write_meta(const std::string& artifact, const nlohmann::json& inputs,
                  std::uint64_t seed) {
    auto out = open(artifact + ".meta.json");
    out << nlohmann::json{{"artifact", artifact},
                          {"inputs", inputs},
                          {"seed", seed},
                          {"tool", kToolName},
                          {"version", kVersion}}
               .dump()
        << '\n';
  }

  void commit() { committed_ = true; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
  bool committed_ = false;
};

}  // namespace detail

/// Roster files are either a JSON array of developer names or an activity
/// object keyed by developer.
inline std::vector<std::string> load_roster_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open roster file: " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw IoError("roster file is not valid JSON: " + path);
  std::vector<std::string> roster;
  if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_string()) throw IoError("roster array must contain strings: " + path);
      roster.push_back(e.get<std::string>());
    }
  } else if (j.is_object()) {
    for (const auto& [dev, _] : j.items()) roster.push_back(dev);
  } else {
    throw IoError("roster file must be a JSON array or object: " + path);
  }
  return roster;
}

/// Writes collab.jsonl, graph.json, stats.json, communities.json,
/// ratings.csv and hist.csv (plus a .meta.json sidecar each) under
/// config.output_dir. Throws IoError / AnalysisError after removing whatever
/// it had already written.
inline void run_pipeline(const PipelineConfig& config) {
  if (config.event_paths.empty()) throw IoError("pipeline needs at least one events file");
  for (const auto& p : config.event_paths) {
    if (!std::filesystem::exists(p)) throw IoError("events file does not exist: " + p);
  }

  ParseResult parsed;
  for (const auto& path : config.event_paths) {
    auto part = parse_events_file(path);
    parsed.events.insert(parsed.events.end(), std::make_move_iterator(part.events.begin()),
                         std::make_move_iterator(part.events.end()));
    parsed.origins.insert(parsed.origins.end(), part.origins.begin(), part.origins.end());
    parsed.diagnostics.insert(parsed.diagnostics.end(), part.diagnostics.begin(),
                              part.diagnostics.end());
  }
  dedup_events(parsed);
  if (!config.quiet && !parsed.diagnostics.empty()) {
    std::cerr << kToolName << ": " << parsed.diagnostics.size()
              << " event record(s) rejected during ingestion\n";
  }

  const auto instances = extract_all_instances(parsed.events, config.window_days);
  const auto activity = derive_activity(parsed.events);

  std::vector<std::string> roster;
  if (config.include_isolates == "auto") {
    roster = roster_from_activity(activity);
  } else if (!config.include_isolates.empty()) {
    roster = load_roster_file(config.include_isolates);
  }
  const auto net = DevNetwork::from_instances(instances, roster);

  std::filesystem::create_directories(config.output_dir);
  detail::ArtifactSet artifacts{config.output_dir};
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& p : config.event_paths)
    inputs.push_back({{"fnv1a64", detail::fnv1a64_hex(p)}, {"path", p}});
  if (!config.include_isolates.empty() && config.include_isolates != "auto") {
    inputs.push_back({{"fnv1a64", detail::fnv1a64_hex(config.include_isolates)},
                      {"path", config.include_isolates}});
  }
  auto emit = [&](const std::string& name, auto&& body) {
    auto out = artifacts.open(name);
    body(out);
    artifacts.write_meta(name, inputs, config.seed);
  };

  emit("collab.jsonl", [&](std::ostream& out) { write_instances_jsonl(out, instances); });
  emit("graph.json", [&](std::ostream& out) { out << to_json(net).dump() << '\n'; });
  emit("stats.json", [&](std::ostream& out) {
    out << to_json(compute_stats(net, config.seed)).dump() << '\n';
  });
  emit("communities.json", [&](std::ostream& out) {
    out << communities_to_json(net, louvain_communities(net, config.seed), config.seed).dump()
        << '\n';
  });

  const MetricOptions metric_opt{config.distance, config.weighted_degree, config.threads};
  const auto table = rating_table(aggregate_ratings(compute_metrics(net, metric_opt)),
                                  activity, net);
  emit("ratings.csv", [&](std::ostream& out) { write_ratings_csv(out, table); });
  emit("hist.csv", [&](std::ostream& out) {
    std::vector<double> ratings;
    ratings.reserve(table.rows.size());
    for (const auto& row : table.rows) ratings.push_back(row.scores.rating);
    write_histogram_csv(out, histogram_counts(ratings, config.bins));
  });

  artifacts.commit();
}

}  // namespace devnet
