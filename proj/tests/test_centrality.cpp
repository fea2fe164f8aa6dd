#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "devnet/centrality.hpp"
#include "devnet/rating.hpp"
#include "devnet/rng.hpp"
#include "oracles.hpp"

using devnet::DevNetwork;
using devnet::DistanceMode;

namespace {

DevNetwork star_graph(int leaves) {
  oracle::TestGraph g;
  g.n = leaves + 1;
  for (int i = 1; i <= leaves; ++i) g.edges.emplace_back(0, i, 1.0);
  return oracle::to_network(g);
}

std::vector<std::string> order_of(const devnet::RatingTable& table) {
  std::vector<std::string> out;
  for (const auto& row : table.rows) out.push_back(row.scores.developer);
  return out;
}

}  // namespace

TEST(Degree, ClosedForms) {
  const auto k4 = oracle::to_network(oracle::complete_graph(4));
  for (double v : devnet::degree_centrality(k4)) EXPECT_DOUBLE_EQ(v, 1.0);

  const auto star = star_graph(4);  // 5 nodes; node 0 is the hub ("n00")
  const auto values = devnet::degree_centrality(star);
  EXPECT_DOUBLE_EQ(values[0], 1.0);
  for (int leaf = 1; leaf <= 4; ++leaf) EXPECT_DOUBLE_EQ(values[leaf], 0.25);

  EXPECT_EQ(devnet::degree_centrality(DevNetwork::from_instances({}, {"only"}))[0], 0.0);
}

TEST(Degree, MatchesAdjacencyOracle) {
  for (std::uint64_t seed = 400; seed < 412; ++seed) {
    const auto g = oracle::random_graph(seed);
    const auto got = devnet::degree_centrality(oracle::to_network(g));
    const auto want = oracle::degree_centrality(g);
    for (int v = 0; v < g.n; ++v) EXPECT_DOUBLE_EQ(got[v], want[v]) << "seed " << seed;
  }
}

TEST(Closeness, ClosedForms) {
  const auto star = star_graph(3);
  EXPECT_DOUBLE_EQ(devnet::closeness_centrality(star)[0], 1.0);

  // two disjoint unit edges on 4 nodes: raw 1 scaled by 1/3
  oracle::TestGraph g;
  g.n = 4;
  g.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
  for (double v : devnet::closeness_centrality(oracle::to_network(g)))
    EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);

  const auto with_isolate = DevNetwork::from_instances(
      {{devnet::CollabKind::FileCoEdition, "a", "b", 0, "r", {}}}, {"iso"});
  EXPECT_DOUBLE_EQ(devnet::closeness_centrality(with_isolate)[with_isolate.index_of("iso")], 0.0);
}

TEST(Closeness, MatchesFloydWarshallOracle) {
  for (std::uint64_t seed = 500; seed < 515; ++seed) {
    const auto g = oracle::random_graph(seed);
    const auto net = oracle::to_network(g);
    for (bool inverse : {true, false}) {
      const auto mode = inverse ? DistanceMode::InverseWeight : DistanceMode::RawWeight;
      const auto got = devnet::closeness_centrality(net, mode);
      const auto want = oracle::closeness_centrality(g, inverse);
      for (int v = 0; v < g.n; ++v) EXPECT_NEAR(got[v], want[v], 1e-9) << "seed " << seed;
    }
  }
}

TEST(Betweenness, ClosedForms) {
  oracle::TestGraph path3;
  path3.n = 3;
  path3.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  const auto values = devnet::betweenness_centrality(oracle::to_network(path3));
  EXPECT_NEAR(values[1], 1.0, 1e-12);
  EXPECT_NEAR(values[0], 0.0, 1e-12);
  EXPECT_NEAR(values[2], 0.0, 1e-12);

  for (double v : devnet::betweenness_centrality(oracle::to_network(oracle::complete_graph(4))))
    EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Betweenness, FractionalCreditOnTiedPaths) {
  // unit 4-cycle: each opposite pair has two equal shortest paths, so every
  // node carries 0.5 raw, 1/6 normalized
  oracle::TestGraph c4;
  c4.n = 4;
  c4.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 0, 1.0}};
  const auto net = oracle::to_network(c4);
  for (double v : devnet::betweenness_centrality(net, DistanceMode::InverseWeight, false))
    EXPECT_NEAR(v, 0.5, 1e-12);
  for (double v : devnet::betweenness_centrality(net))
    EXPECT_NEAR(v, 1.0 / 6.0, 1e-12);
}

TEST(Betweenness, MatchesPathEnumerationOracle) {
  for (std::uint64_t seed = 600; seed < 615; ++seed) {
    const auto g = oracle::random_graph(seed);
    const auto net = oracle::to_network(g);
    for (bool inverse : {true, false}) {
      const auto mode = inverse ? DistanceMode::InverseWeight : DistanceMode::RawWeight;
      const auto got = devnet::betweenness_centrality(net, mode);
      const auto want = oracle::betweenness_centrality(g, inverse);
      for (int v = 0; v < g.n; ++v) EXPECT_NEAR(got[v], want[v], 1e-9) << "seed " << seed;
    }
  }
}

TEST(Betweenness, AddingIsolateKeepsRawAccumulation) {
  const auto g = oracle::random_graph(77);
  const auto names = oracle::node_names(g.n);
  const auto net = oracle::to_network(g);

  oracle::TestGraph bigger = g;
  bigger.n = g.n + 1;
  const auto net_plus = oracle::to_network(bigger);

  const auto before = devnet::betweenness_centrality(net, DistanceMode::InverseWeight, false);
  const auto after = devnet::betweenness_centrality(net_plus, DistanceMode::InverseWeight, false);
  for (int v = 0; v < g.n; ++v) {
    const int idx = net_plus.index_of(names[v]);
    EXPECT_GE(after[idx] + 1e-12, before[v]);
  }

  // degree rank order among pre-existing nodes is unchanged
  const auto deg_before = devnet::degree_centrality(net);
  const auto deg_after = devnet::degree_centrality(net_plus);
  for (int u = 0; u < g.n; ++u) {
    for (int v = 0; v < g.n; ++v) {
      const bool was_less = deg_before[u] < deg_before[v];
      const bool is_less = deg_after[net_plus.index_of(names[u])] <
                           deg_after[net_plus.index_of(names[v])];
      EXPECT_EQ(was_less, is_less);
    }
  }
}

TEST(Eigenvector, ClosedFormsAndComponents) {
  const auto k3 = oracle::to_network(oracle::complete_graph(3));
  for (double v : devnet::eigenvector_centrality(k3)) EXPECT_NEAR(v, 1.0 / std::sqrt(3.0), 1e-9);

  const auto star = star_graph(3);
  const auto sv = devnet::eigenvector_centrality(star);
  EXPECT_GT(sv[0], sv[1]);

  // triangle plus a separate edge: the smaller component scores zero
  oracle::TestGraph g;
  g.n = 5;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {3, 4, 9.0}};
  const auto values = devnet::eigenvector_centrality(oracle::to_network(g));
  EXPECT_GT(values[0], 0.0);
  EXPECT_DOUBLE_EQ(values[3], 0.0);
  EXPECT_DOUBLE_EQ(values[4], 0.0);

  const auto edgeless = DevNetwork::from_instances({}, {"a", "b"});
  for (double v : devnet::eigenvector_centrality(edgeless)) EXPECT_DOUBLE_EQ(v, 0.0);
}

TEST(Eigenvector, ConvergesOnBipartiteComponents) {
  // a path graph is bipartite; plain power iteration on A oscillates there
  oracle::TestGraph p4;
  p4.n = 4;
  p4.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
  const auto got = devnet::eigenvector_centrality(oracle::to_network(p4));
  const auto want = oracle::eigenvector_centrality(p4);
  for (int v = 0; v < p4.n; ++v) EXPECT_NEAR(got[v], want[v], 1e-6);
  EXPECT_NEAR(got[1], got[2], 1e-9);  // symmetry
  EXPECT_GT(got[1], got[0]);          // interior nodes dominate
}

TEST(Eigenvector, MatchesDensePowerOracle) {
  oracle::TestGraph g;
  g.n = 6;
  g.edges = {{0, 1, 3.0}, {0, 2, 1.0}, {1, 2, 2.0}, {2, 3, 5.0}, {3, 4, 1.0}, {4, 5, 2.0},
             {2, 5, 4.0}};
  const auto got = devnet::eigenvector_centrality(oracle::to_network(g));
  const auto want = oracle::eigenvector_centrality(g);
  for (int v = 0; v < g.n; ++v) EXPECT_NEAR(got[v], want[v], 1e-5);

  double norm = 0.0;
  for (double v : got) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-9);
}

TEST(PageRank, ClosedForms) {
  const auto k3 = oracle::to_network(oracle::complete_graph(3));
  for (double v : devnet::pagerank(k3)) EXPECT_NEAR(v, 1.0 / 3.0, 1e-9);

  // one unit edge plus an isolate: fixed point is (20/43, 20/43, 3/43)
  const auto net = DevNetwork::from_instances(
      {{devnet::CollabKind::FileCoEdition, "a", "b", 0, "r", {}}}, {"iso"});
  const auto values = devnet::pagerank(net);
  EXPECT_NEAR(values[net.index_of("a")], 20.0 / 43.0, 1e-6);
  EXPECT_NEAR(values[net.index_of("b")], 20.0 / 43.0, 1e-6);
  EXPECT_NEAR(values[net.index_of("iso")], 3.0 / 43.0, 1e-6);
  EXPECT_LT(values[net.index_of("iso")], values[net.index_of("a")]);
}

TEST(PageRank, SumsToOneAndMatchesDenseOracle) {
  for (std::uint64_t seed = 700; seed < 715; ++seed) {
    const auto g = oracle::random_graph(seed);
    const auto got = devnet::pagerank(oracle::to_network(g));
    double sum = 0.0;
    for (double v : got) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const auto want = oracle::pagerank(g);
    for (int v = 0; v < g.n; ++v) EXPECT_NEAR(got[v], want[v], 1e-8) << "seed " << seed;
  }
}

// --- aggregation -------------------------------------------------------------

namespace {

devnet::MetricSet five_dev_fixture() {
  devnet::MetricSet m;
  m.developers = {"p", "q", "r", "s", "t"};
  m.degree = {0.4, 0.2, 0.8, 0.2, 0.4};
  m.closeness = {0.5, 0.3, 0.9, 0.3, 0.6};
  m.betweenness = {0.0, 0.0, 0.7, 0.1, 0.2};
  m.eigenvector = {0.5, 0.5, 0.5, 0.5, 0.5};  // degenerate: contributes nothing
  m.pagerank = {0.2, 0.15, 0.3, 0.15, 0.2};
  return m;
}

}  // namespace

TEST(Aggregate, SpreadsheetFixture) {
  const auto vectors = devnet::aggregate_ratings(five_dev_fixture());
  ASSERT_EQ(vectors.size(), 5u);
  // hand-normalized sums: p 1, q 0, r 4, s 1/7, t 61/42; ratings = sums / 4
  EXPECT_NEAR(vectors[0].rating, 0.25, 1e-9);
  EXPECT_NEAR(vectors[1].rating, 0.0, 1e-9);
  EXPECT_NEAR(vectors[2].rating, 1.0, 1e-9);
  EXPECT_NEAR(vectors[3].rating, 1.0 / 28.0, 1e-9);
  EXPECT_NEAR(vectors[4].rating, 61.0 / 168.0, 1e-9);
  for (const auto& v : vectors) EXPECT_DOUBLE_EQ(v.n_eigenvector, 0.0);
  EXPECT_NEAR(vectors[4].n_betweenness, 2.0 / 7.0, 1e-12);
}

TEST(Aggregate, DegenerateAndDominantCases) {
  devnet::MetricSet single;
  single.developers = {"only"};
  single.degree = single.closeness = single.betweenness = single.eigenvector = single.pagerank =
      {0.7};
  EXPECT_DOUBLE_EQ(devnet::aggregate_ratings(single)[0].rating, 0.0);

  devnet::MetricSet m;
  m.developers = {"low", "top"};
  m.degree = {0.1, 0.9};
  m.closeness = {0.2, 0.8};
  m.betweenness = {0.0, 0.5};
  m.eigenvector = {0.3, 0.6};
  m.pagerank = {0.4, 0.6};
  const auto vectors = devnet::aggregate_ratings(m);
  EXPECT_DOUBLE_EQ(vectors[1].rating, 1.0);
  EXPECT_DOUBLE_EQ(vectors[0].rating, 0.0);
}

TEST(Aggregate, MismatchedSetsFatal) {
  auto m = five_dev_fixture();
  m.pagerank.pop_back();
  EXPECT_THROW(devnet::aggregate_ratings(m), devnet::AnalysisError);
}

TEST(Aggregate, ScaleInvariance) {
  const auto g = oracle::random_graph(900);
  const auto net = oracle::to_network(g);
  const auto base = devnet::compute_metrics(net);
  const auto base_table =
      devnet::rating_table(devnet::aggregate_ratings(base), {}, net);

  for (double c : {0.5, 10.0}) {
    for (int metric = 0; metric < 5; ++metric) {
      auto scaled = base;
      auto* field = metric == 0   ? &scaled.degree
                    : metric == 1 ? &scaled.closeness
                    : metric == 2 ? &scaled.betweenness
                    : metric == 3 ? &scaled.eigenvector
                                  : &scaled.pagerank;
      for (auto& v : *field) v *= c;
      const auto table = devnet::rating_table(devnet::aggregate_ratings(scaled), {}, net);
      EXPECT_EQ(order_of(table), order_of(base_table)) << "metric " << metric << " c " << c;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        EXPECT_NEAR(table.rows[i].scores.rating, base_table.rows[i].scores.rating, 1e-12);
        EXPECT_NEAR(table.rows[i].scores.n_degree, base_table.rows[i].scores.n_degree, 1e-12);
      }
    }
  }
}

// --- rating table ------------------------------------------------------------

namespace {

devnet::CentralityVector with_rating(const std::string& dev, double rating) {
  devnet::CentralityVector v;
  v.developer = dev;
  v.rating = rating;
  return v;
}

}  // namespace

TEST(RatingTable, BandsRanksAndTies) {
  const auto net = DevNetwork::from_instances(
      {{devnet::CollabKind::FileCoEdition, "A", "B", 0, "r", {}}}, {"C", "D"});
  devnet::ActivityMap activity{{"A", {12, 3}}, {"B", {4, 1}}};
  auto table = devnet::rating_table(
      {with_rating("C", 0.05), with_rating("A", 0.9), with_rating("D", 0.15),
       with_rating("B", 0.15)},
      activity, net);

  ASSERT_EQ(table.rows.size(), 4u);
  EXPECT_EQ(order_of(table), (std::vector<std::string>{"A", "B", "D", "C"}));  // tie: B < D
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    EXPECT_EQ(table.rows[i].rank, static_cast<int>(i) + 1);
  EXPECT_EQ(table.rows[0].band, devnet::Band::High);
  EXPECT_EQ(table.rows[1].band, devnet::Band::Average);
  EXPECT_EQ(table.rows[2].band, devnet::Band::Average);
  EXPECT_EQ(table.rows[3].band, devnet::Band::Low);
  EXPECT_EQ(table.rows[0].commit_count, 12u);
  EXPECT_EQ(table.rows[0].collaborator_count, 1u);
  EXPECT_EQ(table.rows[2].commit_count, 0u);  // D absent from activity

  EXPECT_TRUE(devnet::rating_table({}, {}, DevNetwork::from_instances({})).rows.empty());
}

TEST(RatingTable, BandBoundariesAreStrict) {
  EXPECT_EQ(devnet::band_of(0.2), devnet::Band::Average);
  EXPECT_EQ(devnet::band_of(0.1), devnet::Band::Average);
  EXPECT_EQ(devnet::band_of(0.2000001), devnet::Band::High);
  EXPECT_EQ(devnet::band_of(0.0999999), devnet::Band::Low);
}

TEST(RatingTable, RatingsSpanUnitInterval) {
  for (std::uint64_t seed = 1000; seed < 1010; ++seed) {
    const auto g = oracle::random_graph(seed);
    const auto net = oracle::to_network(g);
    const auto vectors = devnet::aggregate_ratings(devnet::compute_metrics(net));
    double lo = 1e9, hi = -1e9;
    for (const auto& v : vectors) {
      EXPECT_GE(v.rating, 0.0);
      EXPECT_LE(v.rating, 1.0);
      lo = std::min(lo, v.rating);
      hi = std::max(hi, v.rating);
    }
    if (hi > 0.0) {  // non-degenerate
      EXPECT_DOUBLE_EQ(lo, 0.0);
      EXPECT_DOUBLE_EQ(hi, 1.0);
    }
  }
}

TEST(RatingTable, CsvHeaderAndJsonShape) {
  const auto g = oracle::random_graph(1100);
  const auto net = oracle::to_network(g);
  const auto table = devnet::rating_table(
      devnet::aggregate_ratings(devnet::compute_metrics(net)), {}, net);

  std::ostringstream csv;
  devnet::write_ratings_csv(csv, table);
  const auto first_line = csv.str().substr(0, csv.str().find('\n'));
  EXPECT_EQ(first_line, devnet::kRatingsCsvHeader);

  std::ostringstream json;
  devnet::write_ratings_json(json, table);
  const auto parsed = nlohmann::json::parse(json.str());
  ASSERT_EQ(parsed.at("rows").size(), table.rows.size());
  EXPECT_EQ(parsed.at("rows")[0].at("rank").get<int>(), 1);
}

TEST(Histogram, BinEdgesAndClamping) {
  const auto counts = devnet::histogram_counts({0.0, 0.05, 0.1, 0.9999, 1.0}, 20);
  ASSERT_EQ(counts.size(), 20u);
  EXPECT_EQ(counts[0], 1u);   // 0.0
  EXPECT_EQ(counts[1], 1u);   // 0.05 lands in [0.05, 0.10)
  EXPECT_EQ(counts[2], 1u);   // 0.1
  EXPECT_EQ(counts[19], 2u);  // 0.9999 and the inclusive 1.0
  EXPECT_THROW(devnet::histogram_counts({0.5}, 0), devnet::AnalysisError);

  std::ostringstream out;
  devnet::write_histogram_csv(out, devnet::histogram_counts({}, 2));
  EXPECT_EQ(out.str(),
            "bin,low,high,count\n0,0.000000000,0.500000000,0\n1,0.500000000,1.000000000,0\n");
}

// --- determinism -------------------------------------------------------------

TEST(Determinism, MetricsAreBitStableAcrossRunsAndThreads) {
  oracle::TestGraph g;
  g.n = 150;
  std::mt19937_64 rng(123);
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v)
      if (devnet::unit_draw(rng) < 0.05)
        g.edges.emplace_back(u, v, 1.0 + static_cast<double>(devnet::bounded_draw(rng, 5)));
  const auto net = oracle::to_network(g);

  devnet::MetricOptions serial;
  devnet::MetricOptions parallel;
  parallel.threads = 4;
  const auto a = devnet::compute_metrics(net, serial);
  const auto b = devnet::compute_metrics(net, serial);
  const auto c = devnet::compute_metrics(net, parallel);
  for (int v = 0; v < g.n; ++v) {
    EXPECT_EQ(a.betweenness[v], b.betweenness[v]);
    EXPECT_EQ(a.betweenness[v], c.betweenness[v]);
    EXPECT_EQ(a.closeness[v], c.closeness[v]);
    EXPECT_EQ(a.eigenvector[v], c.eigenvector[v]);
    EXPECT_EQ(a.pagerank[v], c.pagerank[v]);
  }
}
