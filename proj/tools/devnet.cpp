// devnet: builds a weighted developer collaboration network from commit and
// pull-request event records, computes per-developer centrality ratings, and
// runs the supporting analyses (stats, communities, histogram, survey
// sampling, synthetic fixtures).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devnet/centrality.hpp"
#include "devnet/collab.hpp"
#include "devnet/error.hpp"
#include "devnet/events.hpp"
#include "devnet/fixture.hpp"
#include "devnet/louvain.hpp"
#include "devnet/network.hpp"
#include "devnet/pipeline.hpp"
#include "devnet/rating.hpp"
#include "devnet/stats.hpp"
#include "devnet/survey.hpp"
#include "devnet/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw devnet::IoError("cannot write output file: " + path);
  return out;
}

devnet::DistanceMode parse_distance(const std::string& s) {
  if (s == "inverse") return devnet::DistanceMode::InverseWeight;
  if (s == "raw-weight") return devnet::DistanceMode::RawWeight;
  throw devnet::IoError("unknown distance mode: " + s);
}

devnet::ParseResult parse_event_files(const std::vector<std::string>& paths) {
  devnet::ParseResult all;
  for (const auto& path : paths) {
    auto part = devnet::parse_events_file(path);
    all.events.insert(all.events.end(), std::make_move_iterator(part.events.begin()),
                      std::make_move_iterator(part.events.end()));
    all.origins.insert(all.origins.end(), part.origins.begin(), part.origins.end());
    all.diagnostics.insert(all.diagnostics.end(), part.diagnostics.begin(),
                           part.diagnostics.end());
  }
  devnet::dedup_events(all);
  return all;
}

struct Cli {
  std::uint64_t seed = 42;
  bool quiet = false;
  bool json = false;

  // ingest
  std::vector<std::string> ingest_events;
  std::string ingest_out, ingest_diagnostics, ingest_activity;
  int ingest_window_days = devnet::kDefaultWindowDays;

  // build
  std::string build_collab, build_roster, build_out;

  // stats
  std::string stats_graph;
  bool stats_json = false, stats_table = false;

  // communities
  std::string communities_graph, communities_out;

  // rate
  std::string rate_graph, rate_activity, rate_out;
  std::string rate_distance = "inverse";
  bool rate_weighted_degree = false;
  int rate_threads = 1;
  std::optional<std::size_t> rate_top;

  // histogram
  std::string hist_ratings, hist_out;
  int hist_bins = 20;

  // sample
  std::string sample_graph, sample_ratings, sample_respondent, sample_out;
  bool sample_eligible = false;

  // fixture
  std::string fixture_out;
  devnet::FixtureParams fixture;

  // pipeline
  devnet::PipelineConfig pipeline;
  std::string pipeline_distance = "inverse";
};

int run_ingest(const Cli& cli) {
  auto parsed = parse_event_files(cli.ingest_events);
  const auto instances = devnet::extract_all_instances(parsed.events, cli.ingest_window_days);
  {
    auto out = open_output(cli.ingest_out);
    devnet::write_instances_jsonl(out, instances);
  }
  if (!cli.ingest_diagnostics.empty()) {
    auto out = open_output(cli.ingest_diagnostics);
    devnet::write_diagnostics_jsonl(out, parsed.diagnostics);
  }
  if (!cli.ingest_activity.empty()) {
    auto out = open_output(cli.ingest_activity);
    out << devnet::to_json(devnet::derive_activity(parsed.events)).dump() << '\n';
  }
  if (cli.json) {
    std::cout << nlohmann::json{{"events", parsed.events.size()},
                                {"instances", instances.size()},
                                {"rejected", parsed.diagnostics.size()}}
                     .dump()
              << '\n';
  } else if (!cli.quiet) {
    std::cerr << "ingest: " << parsed.events.size() << " events ("
              << parsed.diagnostics.size() << " rejected) -> " << instances.size()
              << " collaboration instances\n";
  }
  return kExitOk;
}

int run_build(const Cli& cli) {
  std::ifstream in(cli.build_collab);
  if (!in) throw devnet::IoError("cannot open collaboration file: " + cli.build_collab);
  const auto instances = devnet::read_instances_jsonl(in, cli.build_collab);
  std::vector<std::string> roster;
  if (!cli.build_roster.empty()) roster = devnet::load_roster_file(cli.build_roster);
  const auto net = devnet::DevNetwork::from_instances(instances, roster);
  devnet::save_network(cli.build_out, net);
  if (cli.json) {
    std::cout << nlohmann::json{{"edges", net.edge_count()}, {"nodes", net.node_count()}}.dump()
              << '\n';
  } else if (!cli.quiet) {
    std::cerr << "build: " << net.node_count() << " nodes, " << net.edge_count() << " edges -> "
              << cli.build_out << '\n';
  }
  return kExitOk;
}

int run_stats(const Cli& cli) {
  const auto net = devnet::load_network(cli.stats_graph);
  const auto stats = devnet::compute_stats(net, cli.seed);
  if (cli.stats_table || !(cli.json || cli.stats_json)) {
    std::cout << devnet::to_table(stats);
  } else {
    std::cout << devnet::to_json(stats).dump() << '\n';
  }
  return kExitOk;
}

int run_communities(const Cli& cli) {
  const auto net = devnet::load_network(cli.communities_graph);
  const auto communities = devnet::louvain_communities(net, cli.seed);
  auto out = open_output(cli.communities_out);
  out << devnet::communities_to_json(net, communities, cli.seed).dump() << '\n';
  if (!cli.quiet) {
    std::cerr << "communities: " << communities.size() << " communities (seed " << cli.seed
              << ") -> " << cli.communities_out << '\n';
  }
  return kExitOk;
}

int run_rate(const Cli& cli) {
  const auto net = devnet::load_network(cli.rate_graph);
  if (net.edge_count() == 0 && !cli.quiet) {
    std::cerr << "warning: graph has no edges; eigenvector centrality is all zeros\n";
  }
  devnet::ActivityMap activity;
  if (!cli.rate_activity.empty()) {
    std::ifstream in(cli.rate_activity);
    if (!in) throw devnet::IoError("cannot open activity file: " + cli.rate_activity);
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded())
      throw devnet::IoError("activity file is not valid JSON: " + cli.rate_activity);
    activity = devnet::activity_from_json(j, cli.rate_activity);
  }
  const devnet::MetricOptions opt{parse_distance(cli.rate_distance), cli.rate_weighted_degree,
                                  cli.rate_threads};
  const auto table =
      devnet::rating_table(devnet::aggregate_ratings(devnet::compute_metrics(net, opt)),
                           activity, net);
  auto out = open_output(cli.rate_out);
  if (cli.rate_out.ends_with(".json")) {
    devnet::write_ratings_json(out, table, cli.rate_top);
  } else if (cli.rate_out.ends_with(".csv")) {
    devnet::write_ratings_csv(out, table, cli.rate_top);
  } else {
    throw devnet::IoError("ratings output must end in .csv or .json: " + cli.rate_out);
  }
  if (!cli.quiet) {
    std::cerr << "rate: " << table.rows.size() << " developers -> " << cli.rate_out << '\n';
  }
  return kExitOk;
}

int run_histogram(const Cli& cli) {
  const auto table = devnet::read_ratings(cli.hist_ratings);
  std::vector<double> ratings;
  ratings.reserve(table.rows.size());
  for (const auto& row : table.rows) ratings.push_back(row.scores.rating);
  auto out = open_output(cli.hist_out);
  devnet::write_histogram_csv(out, devnet::histogram_counts(ratings, cli.hist_bins));
  return kExitOk;
}

int run_sample(const Cli& cli) {
  const auto net = devnet::load_network(cli.sample_graph);
  if (cli.sample_eligible) {
    const auto eligible = devnet::eligible_respondents(net);
    if (cli.json) {
      std::cout << nlohmann::json(eligible).dump() << '\n';
    } else {
      for (const auto& dev : eligible) std::cout << dev << '\n';
    }
    return kExitOk;
  }
  if (cli.sample_respondent.empty())
    throw devnet::IoError("sample requires --respondent (or --eligible)");
  if (cli.sample_ratings.empty())
    throw devnet::IoError("sample requires --ratings for the top-50 strata");
  const auto table = devnet::read_ratings(cli.sample_ratings);
  const auto sample =
      devnet::sample_survey_targets(net, table, cli.sample_respondent, cli.seed);
  const auto j = devnet::to_json(sample, cli.seed);
  if (cli.sample_out.empty()) {
    std::cout << j.dump() << '\n';
  } else {
    auto out = open_output(cli.sample_out);
    out << j.dump() << '\n';
  }
  return kExitOk;
}

int run_fixture(const Cli& cli) {
  devnet::FixtureParams params = cli.fixture;
  params.seed = cli.seed;
  const auto corpus = devnet::generate_fixture_corpus(params);
  auto out = open_output(cli.fixture_out);
  out << corpus;
  if (!cli.quiet) {
    std::cerr << "fixture: " << params.repos << " repos, " << params.devs << " devs, "
              << params.days << " days (seed " << params.seed << ") -> " << cli.fixture_out
              << '\n';
  }
  return kExitOk;
}

int run_pipeline_cmd(Cli& cli) {
  cli.pipeline.seed = cli.seed;
  cli.pipeline.quiet = cli.quiet;
  cli.pipeline.distance = parse_distance(cli.pipeline_distance);
  devnet::run_pipeline(cli.pipeline);
  if (!cli.quiet) {
    std::cerr << "pipeline: artifacts written to " << cli.pipeline.output_dir << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"developer collaboration network and centrality rating toolchain"};
  app.set_version_flag("--version", devnet::kVersion);
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too
  app.add_option("--seed", cli.seed, "seed for all seeded operations")->capture_default_str();
  app.add_flag("--quiet", cli.quiet, "suppress progress output on stderr");
  app.add_flag("--json", cli.json, "machine-readable stdout where applicable");

  auto* ingest =
      app.add_subcommand("ingest", "parse event records into collaboration instances");
  ingest->add_option("--events", cli.ingest_events, "event files (line-delimited JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", cli.ingest_out, "output collaboration instances (JSONL)")
      ->required();
  ingest->add_option("--diagnostics", cli.ingest_diagnostics,
                     "write rejection diagnostics (JSONL)");
  ingest->add_option("--activity", cli.ingest_activity,
                     "write per-developer activity counts (JSON)");
  ingest
      ->add_option("--window-days", cli.ingest_window_days,
                   "co-edition window in days (inclusive)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* build = app.add_subcommand("build", "build the developer network from instances");
  build->add_option("--collab", cli.build_collab, "collaboration instances (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--include-isolates", cli.build_roster,
                    "roster file adding zero-collaboration developers as isolates")
      ->check(CLI::ExistingFile);
  build->add_option("--out", cli.build_out, "output graph (JSON)")->required();

  auto* stats = app.add_subcommand("stats", "structural statistics of a graph");
  stats->add_option("--graph", cli.stats_graph, "graph file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* stats_json = stats->add_flag("--json", cli.stats_json, "JSON output");
  stats->add_flag("--table", cli.stats_table, "plain table output (default)")
      ->excludes(stats_json);

  auto* communities = app.add_subcommand("communities", "Louvain community detection");
  communities->add_option("--graph", cli.communities_graph, "graph file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  communities->add_option("--out", cli.communities_out, "output communities (JSON)")->required();

  auto* rate = app.add_subcommand("rate", "centrality measures and aggregated ratings");
  rate->add_option("--graph", cli.rate_graph, "graph file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  rate->add_option("--top", cli.rate_top, "limit output to the top N developers");
  rate->add_option("--distance", cli.rate_distance,
                   "shortest-path distance mode: inverse|raw-weight")
      ->capture_default_str()
      ->check(CLI::IsMember({"inverse", "raw-weight"}));
  rate->add_flag("--weighted-degree", cli.rate_weighted_degree,
                 "use strength-based degree instead of the unweighted default");
  rate->add_option("--activity", cli.rate_activity,
                   "activity counts from `ingest --activity` (JSON)")
      ->check(CLI::ExistingFile);
  rate->add_option("--threads", cli.rate_threads, "worker threads for path-based measures")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  rate->add_option("--out", cli.rate_out, "output table, ratings.csv or ratings.json")
      ->required();

  auto* histogram = app.add_subcommand("histogram", "rating histogram bin counts");
  histogram->add_option("--ratings", cli.hist_ratings, "ratings file (.json or .csv)")
      ->required()
      ->check(CLI::ExistingFile);
  histogram->add_option("--bins", cli.hist_bins, "number of equal-width bins over [0,1]")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  histogram->add_option("--out", cli.hist_out, "output histogram (CSV)")->required();

  auto* sample = app.add_subcommand("sample", "stratified survey-target sampling");
  sample->add_option("--graph", cli.sample_graph, "graph file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--ratings", cli.sample_ratings, "ratings file (.json or .csv)")
      ->check(CLI::ExistingFile);
  sample->add_option("--respondent", cli.sample_respondent, "developer receiving the survey");
  sample->add_flag("--eligible", cli.sample_eligible,
                   "list developers with at least five collaborators and exit");
  sample->add_option("--out", cli.sample_out, "output sample (JSON; default stdout)");

  auto* fixture = app.add_subcommand("fixture", "generate a synthetic event corpus");
  fixture->add_option("--out", cli.fixture_out, "output events file (JSONL)")->required();
  fixture->add_option("--repos", cli.fixture.repos, "repository count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fixture->add_option("--devs", cli.fixture.devs, "developer count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fixture->add_option("--days", cli.fixture.days, "history length in days")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fixture->add_option("--commits-per-repo", cli.fixture.commits_per_repo, "commits per repository")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  fixture
      ->add_option("--reviewed-fraction", cli.fixture.reviewed_fraction,
                   "fraction of commits generated as reviewed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  fixture->add_option("--bots", cli.fixture.bots, "bot account count")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  fixture
      ->add_option("--rejected-prs", cli.fixture.rejected_prs_per_repo,
                   "rejected pull requests per repository")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  auto* pipeline = app.add_subcommand("pipeline", "run the full analysis end to end");
  pipeline->add_option("--events", cli.pipeline.event_paths, "event files (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  pipeline->add_option("--out-dir", cli.pipeline.output_dir, "artifact output directory")
      ->required();
  pipeline
      ->add_option("--window-days", cli.pipeline.window_days,
                   "co-edition window in days (inclusive)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pipeline
      ->add_option("--distance", cli.pipeline_distance,
                   "shortest-path distance mode: inverse|raw-weight")
      ->capture_default_str()
      ->check(CLI::IsMember({"inverse", "raw-weight"}));
  pipeline->add_flag("--weighted-degree", cli.pipeline.weighted_degree,
                     "use strength-based degree in the rating");
  pipeline->add_option(
      "--include-isolates", cli.pipeline.include_isolates,
      "roster file for isolates, or 'auto' to derive the roster from the events");
  pipeline->add_option("--bins", cli.pipeline.bins, "histogram bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pipeline->add_option("--threads", cli.pipeline.threads, "worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (ingest->parsed()) return run_ingest(cli);
    if (build->parsed()) return run_build(cli);
    if (stats->parsed()) return run_stats(cli);
    if (communities->parsed()) return run_communities(cli);
    if (rate->parsed()) return run_rate(cli);
    if (histogram->parsed()) return run_histogram(cli);
    if (sample->parsed()) return run_sample(cli);
    if (fixture->parsed()) return run_fixture(cli);
    if (pipeline->parsed()) return run_pipeline_cmd(cli);
  } catch (const devnet::IoError& e) {
    std::cerr << devnet::kToolName << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const devnet::AnalysisError& e) {
    std::cerr << devnet::kToolName << ": " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << devnet::kToolName << ": " << e.what() << '\n';
    return kExitAnalysis;
  }
  return kExitUsage;
}
