#pragma once
// Synthetic, schema-valid event corpora: seeded commit/PR streams with a
// configurable reviewed fraction, bot accounts, rejected pull requests, and
// bursts of co-edition on shared files. Stands in for live repository data.

#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/error.hpp"
#include "devnet/rng.hpp"
#include "devnet/time.hpp"

namespace devnet {

struct FixtureParams {
  std::uint64_t seed = 1;
  int repos = 1;
  int devs = 6;
  int days = 60;
  int commits_per_repo = 40;
  double reviewed_fraction = 0.5;
  int bots = 1;                  // may be 0
  int rejected_prs_per_repo = 2; // may be 0
};

namespace detail {

inline std::string padded(const char* prefix, int i, int width) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
  return buf;
}

}  // namespace detail

/// Generates a line-delimited event corpus; a fixed seed gives fixed bytes.
inline std::string generate_fixture_corpus(const FixtureParams& p) {
  if (p.repos < 1 || p.devs < 1 || p.days < 1 || p.commits_per_repo < 1)
    throw AnalysisError("fixture parameters must be >= 1");
  if (p.bots < 0 || p.rejected_prs_per_repo < 0)
    throw AnalysisError("fixture counts must be >= 0");
  if (p.reviewed_fraction < 0.0 || p.reviewed_fraction > 1.0)
    throw AnalysisError("reviewed fraction must lie in [0, 1]");

  // 2021-01-01T00:00:00Z
  constexpr std::int64_t kBase = 1609459200;

  std::vector<std::string> devs, bots;
  for (int i = 1; i <= p.devs; ++i) devs.push_back(detail::padded("dev", i, 3));
  for (int i = 1; i <= p.bots; ++i) bots.push_back(detail::padded("bot", i, 2) + "[bot]");

  std::mt19937_64 rng(p.seed);
  auto pick_dev = [&] { return devs[bounded_draw(rng, devs.size())]; };
  auto pick_other_dev = [&](const std::string& not_this) {
    if (devs.size() < 2) return not_this;
    std::string d = pick_dev();
    while (d == not_this) d = pick_dev();
    return d;
  };

  std::ostringstream out;
  auto emit = [&](const nlohmann::json& j) { out << j.dump() << '\n'; };

  for (int r = 1; r <= p.repos; ++r) {
    const std::string repo = "fixture/" + detail::padded("repo", r, 2);
    const int file_count = std::max(3, p.devs / 2);
    std::vector<std::string> files;
    for (int f = 1; f <= file_count; ++f)
      files.push_back("src/" + detail::padded("file", f, 2) + ".rs");

    int pr_seq = 0;
    for (int k = 1; k <= p.commits_per_repo; ++k) {
      const std::string id = detail::padded("repo", r, 2) + "-" + detail::padded("c", k, 4);
      const std::int64_t ts =
          kBase + static_cast<std::int64_t>(bounded_draw(
                      rng, static_cast<std::uint64_t>(p.days) * 86400));
      const bool bot_author = !bots.empty() && unit_draw(rng) < 0.08;
      const std::string author =
          bot_author ? bots[bounded_draw(rng, bots.size())] : pick_dev();

      // burst of 1-3 files from a small shared pool drives co-edition overlap
      std::set<std::string> commit_files;
      const auto nfiles = 1 + bounded_draw(rng, 3);
      for (std::uint64_t f = 0; f < nfiles; ++f)
        commit_files.insert(files[bounded_draw(rng, files.size())]);

      nlohmann::json commit{{"kind", "commit"},
                            {"repo", repo},
                            {"id", id},
                            {"author", author},
                            {"timestamp", format_utc(ts)},
                            {"files", commit_files}};

      const bool reviewed =
          !bot_author && devs.size() >= 2 && unit_draw(rng) < p.reviewed_fraction;
      if (reviewed) {
        const std::string reviewer = pick_other_dev(author);
        if (unit_draw(rng) < 0.5) {
          commit["merged_by"] = reviewer;
        } else {
          const std::string pr_id =
              detail::padded("repo", r, 2) + "-" + detail::padded("pr", ++pr_seq, 4);
          emit(nlohmann::json{{"kind", "pull_request"},
                              {"repo", repo},
                              {"id", pr_id},
                              {"author", author},
                              {"timestamp", format_utc(ts + 3600)},
                              {"approvers", {reviewer}},
                              {"merged", true},
                              {"closed_by", reviewer},
                              {"commit_ids", {id}}});
        }
      } else if (!bot_author && unit_draw(rng) < 0.2) {
        commit["merged_by"] = author;  // self-merge stays unreviewed
      }
      emit(commit);
    }

    for (int q = 1; q <= p.rejected_prs_per_repo; ++q) {
      const std::string author = pick_dev();
      // occasionally self-closed, which produces no collaboration
      const std::string closer = unit_draw(rng) < 0.2 ? author : pick_other_dev(author);
      const std::int64_t ts =
          kBase + static_cast<std::int64_t>(bounded_draw(
                      rng, static_cast<std::uint64_t>(p.days) * 86400));
      emit(nlohmann::json{{"kind", "pull_request"},
                          {"repo", repo},
                          {"id", detail::padded("repo", r, 2) + "-" + detail::padded("rej", q, 4)},
                          {"author", author},
                          {"timestamp", format_utc(ts)},
                          {"approvers", nlohmann::json::array()},
                          {"merged", false},
                          {"closed_by", closer},
                          {"commit_ids", nlohmann::json::array()}});
    }
  }
  return out.str();
}

}  // namespace devnet
