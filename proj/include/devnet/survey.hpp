#pragma once
// Stratified survey-target sampling: for one respondent, draw ten developers
// split 3/2/3/2 across (neighbor x top-50) strata, backfilling from adjacent
// strata when the graph cannot fill a quota.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/error.hpp"
#include "devnet/network.hpp"
#include "devnet/rating.hpp"
#include "devnet/rng.hpp"

namespace devnet {

enum class Stratum { NeighborTop50, NeighborRest, NonNeighborTop50, NonNeighborRest };

inline const char* to_string(Stratum s) {
  switch (s) {
    case Stratum::NeighborTop50: return "neighbor_top50";
    case Stratum::NeighborRest: return "neighbor_rest";
    case Stratum::NonNeighborTop50: return "non_neighbor_top50";
    default: return "non_neighbor_rest";
  }
}

struct SurveyPick {
  std::string developer;
  Stratum stratum;  // the developer's true stratum, not the quota it filled
};

struct SurveySample {
  std::string respondent;
  std::vector<SurveyPick> picks;
};

/// Developers with at least five distinct collaborators, in node order.
inline std::vector<std::string> eligible_respondents(const DevNetwork& net) {
  std::vector<std::string> out;
  for (int v = 0; v < static_cast<int>(net.node_count()); ++v) {
    if (net.degree(v) >= 5) out.push_back(net.name(v));
  }
  return out;
}

/// Draws the ten survey targets for one respondent, without replacement,
/// deterministically for a fixed seed. Quotas are 3/2/3/2; a short stratum
/// backfills from its sibling stratum in the same neighbor class, then from
/// the opposite class. Requires the respondent in the graph and >= 11 nodes.
inline SurveySample sample_survey_targets(const DevNetwork& net, const RatingTable& table,
                                          const std::string& respondent, std::uint64_t seed) {
  const int r = net.index_of(respondent);
  if (r < 0) throw AnalysisError("respondent is not in the network: " + respondent);
  if (net.node_count() < 11)
    throw AnalysisError("insufficient population: survey sampling needs at least 11 developers");

  std::set<std::string> neighbor_names;
  for (const auto& [v, _] : net.neighbors(r)) neighbor_names.insert(net.name(v));

  std::set<std::string> top50;
  for (const auto& row : table.rows) {
    if (top50.size() >= 50) break;
    top50.insert(row.scores.developer);
  }

  constexpr int kNT = 0, kNR = 1, kXT = 2, kXR = 3;
  std::vector<std::string> pools[4];
  for (const auto& dev : net.nodes()) {  // node order, then one seeded shuffle per pool
    if (dev == respondent) continue;
    const bool nb = neighbor_names.count(dev) > 0;
    const bool top = top50.count(dev) > 0;
    pools[nb ? (top ? kNT : kNR) : (top ? kXT : kXR)].push_back(dev);
  }
  std::mt19937_64 rng(seed);
  for (auto& pool : pools) seeded_shuffle(pool, rng);

  constexpr int kTarget[4] = {3, 2, 3, 2};
  constexpr Stratum kStratum[4] = {Stratum::NeighborTop50, Stratum::NeighborRest,
                                   Stratum::NonNeighborTop50, Stratum::NonNeighborRest};
  constexpr int kBackfill[4][3] = {
      {kNR, kXT, kXR},  // NeighborTop50
      {kNT, kXR, kXT},  // NeighborRest
      {kXR, kNT, kNR},  // NonNeighborTop50
      {kXT, kNR, kNT},  // NonNeighborRest
  };

  std::size_t used[4] = {0, 0, 0, 0};
  SurveySample sample{respondent, {}};
  auto take = [&](int pool) -> bool {
    if (used[pool] >= pools[pool].size()) return false;
    sample.picks.push_back({pools[pool][used[pool]++], kStratum[pool]});
    return true;
  };
  int deficit[4];
  for (int s = 0; s < 4; ++s) {
    deficit[s] = kTarget[s];
    while (deficit[s] > 0 && take(s)) --deficit[s];
  }
  for (int s = 0; s < 4; ++s) {
    for (int src : kBackfill[s]) {
      while (deficit[s] > 0 && take(src)) --deficit[s];
    }
  }
  return sample;
}

inline nlohmann::json to_json(const SurveySample& sample, std::uint64_t seed) {
  nlohmann::json picks = nlohmann::json::array();
  for (const auto& p : sample.picks)
    picks.push_back({{"developer", p.developer}, {"stratum", to_string(p.stratum)}});
  return {{"picks", std::move(picks)}, {"respondent", sample.respondent}, {"seed", seed}};
}

}  // namespace devnet
