#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tracekit/types.hpp"

namespace tracekit {

enum class GitEventType { issues, issue_comment, pull_request, push };

struct GitEvent {
    GitEventType type = GitEventType::issues;
    std::string repo;
    nlohmann::json payload;
    std::string timestamp;  // ISO-8601; lexicographic order is chronological
};

struct MineStats {
    std::size_t recognized_events = 0;
    std::size_t skipped_event_types = 0;
    std::size_t parse_errors = 0;
    std::size_t missing_fields = 0;
    std::size_t autolinks_extracted = 0;
    std::size_t dangling_removed = 0;
    std::size_t short_artifacts_dropped = 0;
};

// Newline-delimited JSON events. Unparseable lines and unrecognized event
// types are skipped and tallied rather than aborting the stream.
std::vector<GitEvent> parse_event_stream(std::istream& in, MineStats& stats);

// Reads one event file, transparently decompressing a trailing ".gz".
std::vector<GitEvent> parse_event_file(const std::string& path, MineStats& stats);

enum class AutolinkKind { issue, commit };

struct Autolink {
    AutolinkKind kind = AutolinkKind::issue;
    std::string reference;  // issue number or sha prefix
    std::string repo;       // empty = same repository
};

bool operator==(const Autolink& a, const Autolink& b);

// Issue references: word-bounded '#' + digits (the cross-repo owner/repo#N
// form is parsed too and carries its repo qualifier). Commit references:
// word-bounded lowercase hex of length 7..40 containing at least one digit.
// Duplicates are dropped, first occurrence wins.
std::vector<Autolink> extract_autolinks(const std::string& text,
                                        const std::string& repo);

enum class TimEdgeKind { issue_commit, issue_pull, pull_commit, comment_issue, comment_pull };

const char* to_string(TimEdgeKind kind);
TimEdgeKind tim_edge_kind_from_string(const std::string& s);

struct TimEdge {
    TimEdgeKind kind = TimEdgeKind::issue_commit;
    std::string from_id;
    std::string to_id;
};

struct TimGraph {
    std::vector<Artifact> nodes;  // issue / commit / pull_request / comment
    std::vector<TimEdge> edges;

    const Artifact* find_node(const std::string& id) const;
    std::map<std::string, std::size_t> edge_counts() const;  // by kind name
};

// Materializes the four artifact kinds and five edge kinds. Structural
// edges come from payload nesting (comment-issue, comment-pull,
// pull-commit); autolink edges connect issues to commits and pulls.
// Events are replayed in timestamp order, later text wins. Edges with a
// missing endpoint are dropped and counted.
TimGraph build_tim(const std::vector<GitEvent>& events, MineStats& stats);

// Preprocesses node texts and removes nodes shorter than `min_tokens`
// together with their edges (counts both in `stats`).
TimGraph clean_graph(const TimGraph& graph, std::size_t min_tokens, MineStats& stats);

struct AdjacentPair {
    TokenList issue_text;
    TokenList commit_text;
};

// One pair per issue-commit edge; texts preprocessed, pairs with a side
// shorter than `min_tokens` dropped. Other edge kinds are excluded.
std::vector<AdjacentPair> derive_adjacent_dataset(const TimGraph& graph,
                                                  std::size_t min_tokens = 10);

// Persistence: nodes.jsonl + edges.jsonl in `dir`; adjacent pairs as JSONL
// {"issue_text","commit_text"} with space-joined tokens.
void save_tim(const TimGraph& graph, const std::string& dir);
TimGraph load_tim(const std::string& dir);
void save_adjacent_pairs(const std::vector<AdjacentPair>& pairs,
                         const std::string& path);
std::vector<AdjacentPair> load_adjacent_pairs(const std::string& path);

// Adjacent pairs as a TraceDataset (issues as sources, commits as targets,
// one positive link per pair) so the standard training loop applies.
TraceDataset adjacent_pairs_to_dataset(const std::vector<AdjacentPair>& pairs);

}  // namespace tracekit
