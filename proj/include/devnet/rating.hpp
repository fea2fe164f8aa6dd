#pragma once
// Rank-ordered rating table with High/Average/Low bands and per-developer
// activity, plus CSV/JSON serialization and the rating histogram.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/centrality.hpp"
#include "devnet/collab.hpp"
#include "devnet/error.hpp"
#include "devnet/network.hpp"

namespace devnet {

enum class Band { High, Average, Low };

/// High above 0.2, Low below 0.1, Average between.
inline Band band_of(double rating) {
  if (rating > 0.2) return Band::High;
  if (rating < 0.1) return Band::Low;
  return Band::Average;
}

inline const char* to_string(Band b) {
  switch (b) {
    case Band::High: return "High";
    case Band::Low: return "Low";
    default: return "Average";
  }
}

struct RatingRow {
  int rank = 0;
  CentralityVector scores;
  Band band = Band::Average;
  std::uint64_t commit_count = 0;
  std::uint64_t repo_count = 0;
  std::uint64_t collaborator_count = 0;
};

struct RatingTable {
  std::vector<RatingRow> rows;  // rating descending, ties by developer id
};

/// Sorts, ranks and bands the vectors; activity counts join by developer
/// identifier and default to zero when absent.
inline RatingTable rating_table(std::vector<CentralityVector> vectors,
                                const ActivityMap& activity, const DevNetwork& net) {
  std::sort(vectors.begin(), vectors.end(), [](const auto& x, const auto& y) {
    if (x.rating != y.rating) return x.rating > y.rating;
    return x.developer < y.developer;
  });
  RatingTable table;
  table.rows.reserve(vectors.size());
  int rank = 0;
  for (auto& v : vectors) {
    RatingRow row;
    row.rank = ++rank;
    row.band = band_of(v.rating);
    if (auto it = activity.find(v.developer); it != activity.end()) {
      row.commit_count = it->second.commit_count;
      row.repo_count = it->second.repo_count;
    }
    if (int idx = net.index_of(v.developer); idx >= 0)
      row.collaborator_count = net.degree(idx);
    row.scores = std::move(v);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace detail {

inline std::string fixed9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

}  // namespace detail

inline constexpr const char* kRatingsCsvHeader =
    "rank,developer,rating,band,degree,closeness,betweenness,eigenvector,pagerank,"
    "commit_count,repo_count,collaborator_count";

/// CSV rows in table order; raw metric values at 9 decimal places.
inline void write_ratings_csv(std::ostream& out, const RatingTable& table,
                              std::optional<std::size_t> top = std::nullopt) {
  out << kRatingsCsvHeader << '\n';
  std::size_t limit = top.value_or(table.rows.size());
  for (const auto& row : table.rows) {
    if (limit == 0) break;
    --limit;
    const auto& s = row.scores;
    out << row.rank << ',' << s.developer << ',' << detail::fixed9(s.rating) << ','
        << to_string(row.band) << ',' << detail::fixed9(s.degree) << ','
        << detail::fixed9(s.closeness) << ',' << detail::fixed9(s.betweenness) << ','
        << detail::fixed9(s.eigenvector) << ',' << detail::fixed9(s.pagerank) << ','
        << row.commit_count << ',' << row.repo_count << ',' << row.collaborator_count << '\n';
  }
}

inline nlohmann::json to_json(const RatingTable& table,
                              std::optional<std::size_t> top = std::nullopt) {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t limit = top.value_or(table.rows.size());
  for (const auto& row : table.rows) {
    if (limit == 0) break;
    --limit;
    const auto& s = row.scores;
    rows.push_back({{"band", to_string(row.band)},
                    {"collaborator_count", row.collaborator_count},
                    {"commit_count", row.commit_count},
                    {"developer", s.developer},
                    {"normalized",
                     {{"betweenness", s.n_betweenness},
                      {"closeness", s.n_closeness},
                      {"degree", s.n_degree},
                      {"eigenvector", s.n_eigenvector},
                      {"pagerank", s.n_pagerank}}},
                    {"rank", row.rank},
                    {"rating", s.rating},
                    {"raw",
                     {{"betweenness", s.betweenness},
                      {"closeness", s.closeness},
                      {"degree", s.degree},
                      {"eigenvector", s.eigenvector},
                      {"pagerank", s.pagerank}}},
                    {"repo_count", row.repo_count}});
  }
  return {{"rows", std::move(rows)}};
}

inline void write_ratings_json(std::ostream& out, const RatingTable& table,
                               std::optional<std::size_t> top = std::nullopt) {
  out << to_json(table, top).dump() << '\n';
}

namespace detail {

inline Band band_from_string(const std::string& s, const std::string& where) {
  if (s == "High") return Band::High;
  if (s == "Average") return Band::Average;
  if (s == "Low") return Band::Low;
  throw IoError("unknown band '" + s + "' in " + where);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Reads a rating table back from ratings.json or ratings.csv (decided by
/// extension). CSV carries no normalized values; those read as zero.
inline RatingTable read_ratings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file: " + path);
  RatingTable table;
  if (path.size() >= 5 && path.ends_with(".json")) {
    auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("rows"))
      throw IoError("malformed ratings file: " + path);
    try {
      for (const auto& r : j.at("rows")) {
        RatingRow row;
        row.rank = r.at("rank").get<int>();
        row.band = detail::band_from_string(r.at("band").get<std::string>(), path);
        row.commit_count = r.value("commit_count", std::uint64_t{0});
        row.repo_count = r.value("repo_count", std::uint64_t{0});
        row.collaborator_count = r.value("collaborator_count", std::uint64_t{0});
        auto& s = row.scores;
        s.developer = r.at("developer").get<std::string>();
        s.rating = r.at("rating").get<double>();
        const auto& raw = r.at("raw");
        s.degree = raw.at("degree").get<double>();
        s.closeness = raw.at("closeness").get<double>();
        s.betweenness = raw.at("betweenness").get<double>();
        s.eigenvector = raw.at("eigenvector").get<double>();
        s.pagerank = raw.at("pagerank").get<double>();
        if (const auto it = r.find("normalized"); it != r.end()) {
          s.n_degree = it->at("degree").get<double>();
          s.n_closeness = it->at("closeness").get<double>();
          s.n_betweenness = it->at("betweenness").get<double>();
          s.n_eigenvector = it->at("eigenvector").get<double>();
          s.n_pagerank = it->at("pagerank").get<double>();
        }
        table.rows.push_back(std::move(row));
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed ratings file " + path + ": " + e.what());
    }
    return table;
  }

  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line).size() != 12)
    throw IoError("malformed ratings CSV header: " + path);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 12)
      throw IoError("malformed ratings CSV row at " + path + ":" + std::to_string(line_no));
    try {
      RatingRow row;
      row.rank = std::stoi(f[0]);
      auto& s = row.scores;
      s.developer = f[1];
      s.rating = std::stod(f[2]);
      row.band = detail::band_from_string(f[3], path);
      s.degree = std::stod(f[4]);
      s.closeness = std::stod(f[5]);
      s.betweenness = std::stod(f[6]);
      s.eigenvector = std::stod(f[7]);
      s.pagerank = std::stod(f[8]);
      row.commit_count = std::stoull(f[9]);
      row.repo_count = std::stoull(f[10]);
      row.collaborator_count = std::stoull(f[11]);
      table.rows.push_back(std::move(row));
    } catch (const std::exception&) {
      throw IoError("malformed ratings CSV row at " + path + ":" + std::to_string(line_no));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Rating histogram (equal-width bins over [0, 1]; the last bin includes 1).

inline std::vector<std::uint64_t> histogram_counts(const std::vector<double>& ratings, int bins) {
  if (bins < 1) throw AnalysisError("histogram needs at least one bin");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double r : ratings) {
    auto b = static_cast<std::int64_t>(r * bins);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

inline void write_histogram_csv(std::ostream& out, const std::vector<std::uint64_t>& counts) {
  const auto bins = counts.size();
  out << "bin,low,high,count\n";
  for (std::size_t i = 0; i < bins; ++i) {
    out << i << ',' << detail::fixed9(static_cast<double>(i) / static_cast<double>(bins)) << ','
        << detail::fixed9(static_cast<double>(i + 1) / static_cast<double>(bins)) << ','
        << counts[i] << '\n';
  }
}

}  // namespace devnet
