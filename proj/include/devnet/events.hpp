#pragma once
// Line-delimited JSON event records: one commit or pull-request observation
// per line. Malformed lines become diagnostics, never silent drops.

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/error.hpp"
#include "devnet/time.hpp"

namespace devnet {

enum class EventKind { Commit, PullRequest };

struct EventRecord {
  EventKind kind = EventKind::Commit;
  std::string repo;
  std::string id;
  std::string author;
  std::int64_t timestamp = 0;  // UTC epoch seconds

  // commit only
  std::vector<std::string> files;
  std::optional<std::string> merged_by;

  // pull request only
  std::vector<std::string> approvers;
  std::optional<std::string> closed_by;
  bool merged = false;
  std::vector<std::string> commit_ids;
};

struct ParseDiagnostic {
  std::string file;  // empty for anonymous streams
  std::size_t line = 0;
  std::string reason;
};

struct ParseResult {
  std::vector<EventRecord> events;
  // (file, line) each event came from, parallel to `events`
  std::vector<std::pair<std::string, std::size_t>> origins;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Bot accounts carry the exact suffix "[bot]".
inline bool is_bot(std::string_view dev) { return dev.ends_with("[bot]"); }

namespace detail {

// One record line -> EventRecord, or a diagnostic reason on failure.
inline std::optional<std::string> record_from_json(const nlohmann::json& j,
                                                   EventRecord& out) {
  if (!j.is_object()) return "record is not an object";

  auto require_string = [&](const char* key, std::string& dst) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::string("missing field: ") + key;
    if (!it->is_string() || it->get_ref<const std::string&>().empty())
      return std::string("invalid field: ") + key;
    dst = it->get<std::string>();
    return std::nullopt;
  };
  auto optional_string = [&](const char* key, std::optional<std::string>& dst)
      -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string() || it->get_ref<const std::string&>().empty())
      return std::string("invalid field: ") + key;
    dst = it->get<std::string>();
    return std::nullopt;
  };
  auto string_list = [&](const char* key, std::vector<std::string>& dst)
      -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_array()) return std::string("invalid field: ") + key;
    for (const auto& e : *it) {
      if (!e.is_string()) return std::string("invalid field: ") + key;
      dst.push_back(e.get<std::string>());
    }
    return std::nullopt;
  };
  auto forbid = [&](const char* key) -> std::optional<std::string> {
    if (j.contains(key)) return std::string("unexpected field: ") + key;
    return std::nullopt;
  };

  std::string kind;
  if (auto e = require_string("kind", kind)) return e;
  if (kind == "commit") {
    out.kind = EventKind::Commit;
  } else if (kind == "pull_request") {
    out.kind = EventKind::PullRequest;
  } else {
    return "invalid field: kind";
  }

  if (auto e = require_string("repo", out.repo)) return e;
  if (auto e = require_string("id", out.id)) return e;
  if (auto e = require_string("author", out.author)) return e;

  std::string ts;
  if (auto e = require_string("timestamp", ts)) return e;
  auto parsed = parse_utc(ts);
  if (!parsed) return "invalid timestamp: " + ts;
  out.timestamp = *parsed;

  if (out.kind == EventKind::Commit) {
    for (const char* key : {"approvers", "closed_by", "merged", "commit_ids"})
      if (auto e = forbid(key)) return e;
    if (auto e = string_list("files", out.files)) return e;
    if (auto e = optional_string("merged_by", out.merged_by)) return e;
  } else {
    for (const char* key : {"files", "merged_by"})
      if (auto e = forbid(key)) return e;
    auto it = j.find("merged");
    if (it == j.end() || it->is_null()) return "missing field: merged";
    if (!it->is_boolean()) return "invalid field: merged";
    out.merged = it->get<bool>();
    if (auto e = string_list("approvers", out.approvers)) return e;
    if (auto e = optional_string("closed_by", out.closed_by)) return e;
    if (auto e = string_list("commit_ids", out.commit_ids)) return e;
  }
  return std::nullopt;
}

}  // namespace detail

/// Parses a line-delimited stream of event records. Every non-blank line
/// yields exactly one event or one diagnostic; input order is preserved.
inline ParseResult parse_events(std::istream& in, const std::string& source_name = "") {
  if (!in) throw IoError("unreadable event stream: " + source_name);
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
      result.diagnostics.push_back({source_name, line_no, "invalid JSON"});
      continue;
    }
    EventRecord rec;
    if (auto reason = detail::record_from_json(j, rec)) {
      result.diagnostics.push_back({source_name, line_no, *reason});
    } else {
      result.events.push_back(std::move(rec));
      result.origins.emplace_back(source_name, line_no);
    }
  }
  if (in.bad()) throw IoError("read failure on event stream: " + source_name);
  return result;
}

inline ParseResult parse_events_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open events file: " + path);
  return parse_events(in, path);
}

/// Drops duplicate records (same repo + kind + id), keeping the last
/// occurrence and emitting one diagnostic per superseded record.
inline void dedup_events(ParseResult& parsed) {
  std::map<std::tuple<std::string, int, std::string>, std::size_t> last;
  for (std::size_t i = 0; i < parsed.events.size(); ++i) {
    const auto& e = parsed.events[i];
    last[{e.repo, static_cast<int>(e.kind), e.id}] = i;
  }
  if (last.size() == parsed.events.size()) return;

  std::vector<EventRecord> events;
  std::vector<std::pair<std::string, std::size_t>> origins;
  events.reserve(last.size());
  for (std::size_t i = 0; i < parsed.events.size(); ++i) {
    const auto& e = parsed.events[i];
    if (last[{e.repo, static_cast<int>(e.kind), e.id}] != i) {
      parsed.diagnostics.push_back(
          {parsed.origins[i].first, parsed.origins[i].second,
           "duplicate record: " + e.repo + "/" + e.id + " superseded by a later record"});
      continue;
    }
    events.push_back(std::move(parsed.events[i]));
    origins.push_back(std::move(parsed.origins[i]));
  }
  parsed.events = std::move(events);
  parsed.origins = std::move(origins);
}

inline void write_diagnostics_jsonl(std::ostream& out,
                                    const std::vector<ParseDiagnostic>& diags) {
  for (const auto& d : diags) {
    nlohmann::json j{{"file", d.file}, {"line", d.line}, {"reason", d.reason}};
    out << j.dump() << '\n';
  }
}

}  // namespace devnet
