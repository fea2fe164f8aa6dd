#pragma once
// Derives dated collaboration instances from event records: file co-edition
// within a bounded window, and author-reviewer relations from reviewed
// commits and rejected pull requests. Bots and self-pairs never appear.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "devnet/error.hpp"
#include "devnet/events.hpp"
#include "devnet/time.hpp"

namespace devnet {

inline constexpr int kDefaultWindowDays = 30;

enum class CollabKind { FileCoEdition, AuthorReviewer };

inline const char* to_string(CollabKind k) {
  return k == CollabKind::FileCoEdition ? "co_edition" : "author_reviewer";
}

struct CollaborationInstance {
  CollabKind kind = CollabKind::FileCoEdition;
  std::string a, b;  // lexicographic, a < b
  std::int64_t timestamp = 0;
  std::string repo;
  std::vector<std::string> source_ids;

  CollaborationInstance() = default;
  CollaborationInstance(CollabKind k, std::string x, std::string y,
                        std::int64_t ts, std::string r, std::vector<std::string> ids)
      : kind(k), timestamp(ts), repo(std::move(r)), source_ids(std::move(ids)) {
    if (x == y) throw AnalysisError("self-collaboration is never recorded: " + x);
    if (x < y) {
      a = std::move(x);
      b = std::move(y);
    } else {
      a = std::move(y);
      b = std::move(x);
    }
  }

};

// Canonical file order sorts on the serialized kind name, not the enumerator,
// so the on-disk ordering stays self-evident.
inline void canonical_sort(std::vector<CollaborationInstance>& v) {
  std::sort(v.begin(), v.end(), [](const CollaborationInstance& x, const CollaborationInstance& y) {
    return std::forward_as_tuple(x.repo, std::string_view(to_string(x.kind)), x.a, x.b,
                                 x.timestamp, x.source_ids) <
           std::forward_as_tuple(y.repo, std::string_view(to_string(y.kind)), y.a, y.b,
                                 y.timestamp, y.source_ids);
  });
}

/// Pull requests of one corpus indexed by (repo, contained commit id).
/// Owns copies of the PR records, so it stays valid independently of the
/// event list it was built from.
class PrIndex {
 public:
  PrIndex() = default;
  explicit PrIndex(const std::vector<EventRecord>& events) {
    for (const auto& e : events) {
      if (e.kind != EventKind::PullRequest) continue;
      prs_.push_back(e);
    }
    for (std::size_t i = 0; i < prs_.size(); ++i) {
      for (const auto& cid : prs_[i].commit_ids) index_[{prs_[i].repo, cid}].push_back(i);
    }
  }

  std::vector<const EventRecord*> lookup(const std::string& repo,
                                         const std::string& commit_id) const {
    std::vector<const EventRecord*> out;
    if (auto it = index_.find({repo, commit_id}); it != index_.end()) {
      out.reserve(it->second.size());
      for (std::size_t i : it->second) out.push_back(&prs_[i]);
    }
    return out;
  }

 private:
  std::vector<EventRecord> prs_;
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> index_;
};

struct CommitReview {
  bool reviewed = false;
  // reviewer -> sorted ids of PRs whose approval names the reviewer; empty
  // when the reviewer comes from merged_by alone
  std::map<std::string, std::vector<std::string>> reviewers;
};

/// A commit is reviewed iff an associated PR carries an approval from a
/// different developer, or it was merged by a different developer. The author
/// never reviews itself and bots never count as reviewers.
inline CommitReview classify_commit(const EventRecord& commit, const PrIndex& prs) {
  CommitReview out;
  if (commit.kind != EventKind::Commit)
    throw AnalysisError("classify_commit requires a commit record: " + commit.id);
  std::map<std::string, std::set<std::string>> acc;
  for (const EventRecord* pr : prs.lookup(commit.repo, commit.id)) {
    for (const auto& approver : pr->approvers) {
      if (approver == commit.author || is_bot(approver)) continue;
      acc[approver].insert(pr->id);
    }
  }
  if (commit.merged_by && *commit.merged_by != commit.author && !is_bot(*commit.merged_by)) {
    acc.try_emplace(*commit.merged_by);
  }
  for (auto& [reviewer, pr_ids] : acc) {
    out.reviewers.emplace(reviewer, std::vector<std::string>(pr_ids.begin(), pr_ids.end()));
  }
  out.reviewed = !out.reviewers.empty();
  return out;
}

/// Author-reviewer instances: one per (author, reviewer) per reviewed commit,
/// plus one per (author, approver-or-closer) per rejected pull request.
inline std::vector<CollaborationInstance> extract_review_instances(
    const std::vector<EventRecord>& events) {
  PrIndex index(events);
  std::vector<CollaborationInstance> out;
  for (const auto& e : events) {
    if (e.kind == EventKind::Commit) {
      if (is_bot(e.author)) continue;
      for (const auto& [reviewer, pr_ids] : classify_commit(e, index).reviewers) {
        std::vector<std::string> ids = pr_ids;
        ids.push_back(e.id);
        std::sort(ids.begin(), ids.end());
        out.emplace_back(CollabKind::AuthorReviewer, e.author, reviewer, e.timestamp,
                         e.repo, std::move(ids));
      }
    } else if (!e.merged) {
      if (is_bot(e.author)) continue;
      std::set<std::string> targets(e.approvers.begin(), e.approvers.end());
      if (e.closed_by) targets.insert(*e.closed_by);
      targets.erase(e.author);
      for (const auto& t : targets) {
        if (is_bot(t)) continue;
        out.emplace_back(CollabKind::AuthorReviewer, e.author, t, e.timestamp, e.repo,
                         std::vector<std::string>{e.id});
      }
    }
  }
  return out;
}

/// File co-edition instances: one per unordered pair of commits by two
/// different non-bot authors touching the same file within the window
/// (inclusive, window_days * 86400 seconds). The instance carries the later
/// commit's timestamp.
inline std::vector<CollaborationInstance> extract_coedition_instances(
    const std::vector<EventRecord>& events, int window_days = kDefaultWindowDays) {
  if (window_days < 1) throw AnalysisError("co-edition window must be >= 1 day");
  const std::int64_t window = static_cast<std::int64_t>(window_days) * 86400;

  struct Touch {
    const EventRecord* commit;
  };
  std::map<std::pair<std::string, std::string>, std::vector<Touch>> by_file;
  for (const auto& e : events) {
    if (e.kind != EventKind::Commit || is_bot(e.author)) continue;
    std::set<std::string> files(e.files.begin(), e.files.end());
    for (const auto& f : files) by_file[{e.repo, f}].push_back({&e});
  }

  std::vector<CollaborationInstance> out;
  for (const auto& [key, touches] : by_file) {
    for (std::size_t i = 0; i < touches.size(); ++i) {
      for (std::size_t j = i + 1; j < touches.size(); ++j) {
        const EventRecord& ci = *touches[i].commit;
        const EventRecord& cj = *touches[j].commit;
        if (ci.author == cj.author) continue;
        const std::int64_t dt =
            ci.timestamp >= cj.timestamp ? ci.timestamp - cj.timestamp : cj.timestamp - ci.timestamp;
        if (dt > window) continue;
        const bool i_first = std::tie(ci.timestamp, ci.id) <= std::tie(cj.timestamp, cj.id);
        const EventRecord& first = i_first ? ci : cj;
        const EventRecord& second = i_first ? cj : ci;
        out.emplace_back(CollabKind::FileCoEdition, ci.author, cj.author,
                         std::max(ci.timestamp, cj.timestamp), key.first,
                         std::vector<std::string>{first.id, second.id});
      }
    }
  }
  return out;
}

/// All instances of a corpus in canonical order.
inline std::vector<CollaborationInstance> extract_all_instances(
    const std::vector<EventRecord>& events, int window_days = kDefaultWindowDays) {
  auto out = extract_review_instances(events);
  auto co = extract_coedition_instances(events, window_days);
  out.insert(out.end(), std::make_move_iterator(co.begin()), std::make_move_iterator(co.end()));
  canonical_sort(out);
  return out;
}

// ---------------------------------------------------------------------------
// Per-developer activity (commit / repository participation counts). Feeds
// the rating table; also serves as the developer roster for isolate-aware
// network construction.

struct DevActivity {
  std::uint64_t commit_count = 0;
  std::uint64_t repo_count = 0;
};

using ActivityMap = std::map<std::string, DevActivity>;

/// Counts, per non-bot developer, the commits they touched as author or
/// reviewer and the distinct repositories they participated in (as commit
/// author/reviewer or PR author/approver/closer).
inline ActivityMap derive_activity(const std::vector<EventRecord>& events) {
  PrIndex index(events);
  std::map<std::string, std::set<std::string>> repos;
  std::map<std::string, std::uint64_t> commits;
  auto touch = [&](const std::string& dev, const std::string& repo) {
    if (is_bot(dev)) return;
    repos[dev].insert(repo);
  };
  for (const auto& e : events) {
    if (e.kind == EventKind::Commit) {
      if (!is_bot(e.author)) {
        touch(e.author, e.repo);
        ++commits[e.author];
      }
      // human reviewers of bot-authored commits still participated
      for (const auto& [reviewer, _] : classify_commit(e, index).reviewers) {
        touch(reviewer, e.repo);
        ++commits[reviewer];
      }
    } else {
      touch(e.author, e.repo);
      for (const auto& ap : e.approvers) touch(ap, e.repo);
      if (e.closed_by) touch(*e.closed_by, e.repo);
    }
  }
  ActivityMap out;
  for (const auto& [dev, repo_set] : repos) {
    out[dev] = {commits.count(dev) ? commits[dev] : 0,
                static_cast<std::uint64_t>(repo_set.size())};
  }
  return out;
}

inline std::vector<std::string> roster_from_activity(const ActivityMap& activity) {
  std::vector<std::string> out;
  out.reserve(activity.size());
  for (const auto& [dev, _] : activity) out.push_back(dev);
  return out;
}

// ---------------------------------------------------------------------------
// Serialization. One compact JSON object per line; field names are part of
// the interface.

inline nlohmann::json to_json(const CollaborationInstance& inst) {
  return {{"a", inst.a},
          {"b", inst.b},
          {"kind", to_string(inst.kind)},
          {"repo", inst.repo},
          {"source_ids", inst.source_ids},
          {"timestamp", format_utc(inst.timestamp)}};
}

inline void write_instances_jsonl(std::ostream& out,
                                  const std::vector<CollaborationInstance>& instances) {
  for (const auto& inst : instances) out << to_json(inst).dump() << '\n';
}

inline std::vector<CollaborationInstance> read_instances_jsonl(std::istream& in,
                                                               const std::string& source_name) {
  std::vector<CollaborationInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = source_name + ":" + std::to_string(line_no);
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw IoError("malformed collaboration record at " + where);
    try {
      const std::string kind = j.at("kind").get<std::string>();
      CollabKind k;
      if (kind == "co_edition") {
        k = CollabKind::FileCoEdition;
      } else if (kind == "author_reviewer") {
        k = CollabKind::AuthorReviewer;
      } else {
        throw IoError("unknown collaboration kind at " + where);
      }
      auto ts = parse_utc(j.at("timestamp").get<std::string>());
      if (!ts) throw IoError("invalid timestamp at " + where);
      CollaborationInstance inst(k, j.at("a").get<std::string>(), j.at("b").get<std::string>(),
                                 *ts, j.at("repo").get<std::string>(),
                                 j.value("source_ids", std::vector<std::string>{}));
      out.push_back(std::move(inst));
    } catch (const nlohmann::json::exception&) {
      throw IoError("malformed collaboration record at " + where);
    }
  }
  return out;
}

inline nlohmann::json to_json(const ActivityMap& activity) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [dev, act] : activity) {
    j[dev] = {{"commit_count", act.commit_count}, {"repo_count", act.repo_count}};
  }
  return j;
}

inline ActivityMap activity_from_json(const nlohmann::json& j, const std::string& source_name) {
  if (!j.is_object()) throw IoError("activity file is not a JSON object: " + source_name);
  ActivityMap out;
  for (const auto& [dev, v] : j.items()) {
    DevActivity act;
    if (v.is_object()) {
      act.commit_count = v.value("commit_count", std::uint64_t{0});
      act.repo_count = v.value("repo_count", std::uint64_t{0});
    }
    out[dev] = act;
  }
  return out;
}

}  // namespace devnet
