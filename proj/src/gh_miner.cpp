#include "tracekit/gh_miner.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_map>

#include "tracekit/preprocess.hpp"

namespace tracekit {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<GitEvent> parse_event_stream(std::istream& in, MineStats& stats) {
    std::vector<GitEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const std::exception&) {
            ++stats.parse_errors;
            continue;
        }
        if (!obj.is_object() || !obj.contains("type") || !obj["type"].is_string()) {
            ++stats.missing_fields;
            continue;
        }
        const std::string type = obj["type"].get<std::string>();
        GitEvent event;
        if (type == "IssuesEvent") {
            event.type = GitEventType::issues;
        } else if (type == "IssueCommentEvent") {
            event.type = GitEventType::issue_comment;
        } else if (type == "PullRequestEvent") {
            event.type = GitEventType::pull_request;
        } else if (type == "PushEvent") {
            event.type = GitEventType::push;
        } else {
            ++stats.skipped_event_types;
            continue;
        }
        if (obj.contains("repo")) {
            if (obj["repo"].is_object() && obj["repo"].contains("name")) {
                event.repo = obj["repo"]["name"].get<std::string>();
            } else if (obj["repo"].is_string()) {
                event.repo = obj["repo"].get<std::string>();
            }
        }
        if (event.repo.empty()) {
            ++stats.missing_fields;
            continue;
        }
        if (obj.contains("created_at") && obj["created_at"].is_string()) {
            event.timestamp = obj["created_at"].get<std::string>();
        }
        if (!obj.contains("payload") || !obj["payload"].is_object()) {
            ++stats.missing_fields;
            continue;
        }
        event.payload = obj["payload"];
        ++stats.recognized_events;
        events.push_back(std::move(event));
    }
    return events;
}

bool operator==(const Autolink& a, const Autolink& b) {
    return a.kind == b.kind && a.reference == b.reference && a.repo == b.repo;
}

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool is_repo_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.';
}

bool is_lower_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
}

}  // namespace

std::vector<Autolink> extract_autolinks(const std::string& text,
                                        const std::string& repo) {
    std::vector<Autolink> out;
    std::set<std::tuple<int, std::string, std::string>> seen;
    const auto emit = [&](AutolinkKind kind, std::string ref, std::string link_repo) {
        if (seen.insert({static_cast<int>(kind), ref, link_repo}).second) {
            out.push_back({kind, std::move(ref), std::move(link_repo)});
        }
    };

    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (c == '#') {
            std::size_t j = i + 1;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j == i + 1) continue;              // '#' without digits
            if (j < n && is_word_char(text[j])) continue;  // "#12abc"
            const std::string number = text.substr(i + 1, j - i - 1);
            if (i == 0 || !is_word_char(text[i - 1])) {
                emit(AutolinkKind::issue, number, "");
            } else {
                // Possible cross-repo form owner/name#N: walk back over the
                // name, one '/', then the owner.
                std::size_t name_start = i;
                while (name_start > 0 && is_repo_char(text[name_start - 1])) {
                    --name_start;
                }
                if (name_start < i && name_start > 0 &&
                    text[name_start - 1] == '/') {
                    std::size_t owner_start = name_start - 1;
                    while (owner_start > 0 && is_repo_char(text[owner_start - 1])) {
                        --owner_start;
                    }
                    const bool bounded_left =
                        owner_start == 0 || (!is_word_char(text[owner_start - 1]) &&
                                             text[owner_start - 1] != '/');
                    if (owner_start < name_start - 1 && bounded_left) {
                        emit(AutolinkKind::issue, number,
                             text.substr(owner_start, i - owner_start));
                    }
                }
            }
            i = j - 1;
        } else if (is_lower_hex(c) && (i == 0 || (!is_word_char(text[i - 1]) &&
                                                  text[i - 1] != '#'))) {
            std::size_t j = i;
            bool has_digit = false;
            while (j < n && is_lower_hex(text[j])) {
                has_digit = has_digit ||
                            std::isdigit(static_cast<unsigned char>(text[j]));
                ++j;
            }
            const std::size_t len = j - i;
            const bool bounded = j >= n || !is_word_char(text[j]);
            if (bounded && has_digit && len >= 7 && len <= 40) {
                emit(AutolinkKind::commit, text.substr(i, len), "");
            }
            i = j - 1;
        }
    }
    return out;
}

const char* to_string(TimEdgeKind kind) {
    switch (kind) {
        case TimEdgeKind::issue_commit: return "issue_commit";
        case TimEdgeKind::issue_pull: return "issue_pull";
        case TimEdgeKind::pull_commit: return "pull_commit";
        case TimEdgeKind::comment_issue: return "comment_issue";
        case TimEdgeKind::comment_pull: return "comment_pull";
    }
    return "issue_commit";
}

TimEdgeKind tim_edge_kind_from_string(const std::string& s) {
    if (s == "issue_commit") return TimEdgeKind::issue_commit;
    if (s == "issue_pull") return TimEdgeKind::issue_pull;
    if (s == "pull_commit") return TimEdgeKind::pull_commit;
    if (s == "comment_issue") return TimEdgeKind::comment_issue;
    if (s == "comment_pull") return TimEdgeKind::comment_pull;
    throw std::runtime_error("unknown TIM edge kind: " + s);
}

const Artifact* TimGraph::find_node(const std::string& id) const {
    for (const auto& node : nodes) {
        if (node.id == id) return &node;
    }
    return nullptr;
}

std::map<std::string, std::size_t> TimGraph::edge_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : edges) ++counts[to_string(e.kind)];
    return counts;
}

namespace {

std::string issue_node_id(const std::string& repo, const std::string& number) {
    return repo + "#" + number;
}
std::string pull_node_id(const std::string& repo, const std::string& number) {
    return repo + "!" + number;
}
std::string commit_node_id(const std::string& repo, const std::string& sha) {
    return repo + "@" + sha;
}
std::string comment_node_id(const std::string& repo, const std::string& id) {
    return repo + "/comment/" + id;
}

struct PendingRef {
    std::string from_id;
    ArtifactKind from_kind = ArtifactKind::generic;
    std::string repo;
    Autolink link;
    bool structural = false;  // payload-nesting edge rather than an autolink
    ArtifactKind parent_kind = ArtifactKind::generic;  // structural comments
};

struct GraphBuilder {
    std::vector<Artifact> nodes;
    std::unordered_map<std::string, std::size_t> node_index;
    std::vector<PendingRef> refs;
    // repo -> full sha list, for prefix resolution
    std::unordered_map<std::string, std::vector<std::string>> shas_by_repo;

    Artifact& upsert(const std::string& id, ArtifactKind kind,
                     const std::string& repo) {
        const auto it = node_index.find(id);
        if (it != node_index.end()) return nodes[it->second];
        Artifact a;
        a.id = id;
        a.kind = kind;
        a.project_id = repo;
        node_index.emplace(id, nodes.size());
        nodes.push_back(std::move(a));
        return nodes.back();
    }
};

std::string string_or_empty(const json& obj, const char* key) {
    if (obj.contains(key) && obj[key].is_string()) {
        return obj[key].get<std::string>();
    }
    return {};
}

std::string number_to_string(const json& obj, const char* key) {
    if (!obj.contains(key)) return {};
    if (obj[key].is_number_integer()) {
        return std::to_string(obj[key].get<long long>());
    }
    if (obj[key].is_string()) return obj[key].get<std::string>();
    return {};
}

}  // namespace

TimGraph build_tim(const std::vector<GitEvent>& events, MineStats& stats) {
    // Stable timestamp order; later events overwrite earlier text.
    std::vector<const GitEvent*> ordered;
    ordered.reserve(events.size());
    for (const auto& e : events) ordered.push_back(&e);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const GitEvent* a, const GitEvent* b) {
                         return a->timestamp < b->timestamp;
                     });

    GraphBuilder b;
    const auto note_autolinks = [&](const std::string& from_id, ArtifactKind kind,
                                    const std::string& repo, const std::string& text) {
        for (auto& link : extract_autolinks(text, repo)) {
            ++stats.autolinks_extracted;
            b.refs.push_back({from_id, kind, repo, std::move(link)});
        }
    };

    for (const GitEvent* event : ordered) {
        const json& p = event->payload;
        const std::string& repo = event->repo;
        switch (event->type) {
            case GitEventType::issues: {
                if (!p.contains("issue") || !p["issue"].is_object()) {
                    ++stats.missing_fields;
                    break;
                }
                const std::string number = number_to_string(p["issue"], "number");
                if (number.empty()) {
                    ++stats.missing_fields;
                    break;
                }
                Artifact& node = b.upsert(issue_node_id(repo, number),
                                          ArtifactKind::issue, repo);
                node.title = string_or_empty(p["issue"], "title");
                node.body = string_or_empty(p["issue"], "body");
                note_autolinks(node.id, ArtifactKind::issue, repo,
                               node.title + "\n" + node.body);
                break;
            }
            case GitEventType::issue_comment: {
                if (!p.contains("issue") || !p.contains("comment") ||
                    !p["issue"].is_object() || !p["comment"].is_object()) {
                    ++stats.missing_fields;
                    break;
                }
                const std::string number = number_to_string(p["issue"], "number");
                const std::string comment_id = number_to_string(p["comment"], "id");
                if (number.empty() || comment_id.empty()) {
                    ++stats.missing_fields;
                    break;
                }
                // An "issue" carrying a pull_request key is really a pull.
                const bool on_pull = p["issue"].contains("pull_request");
                Artifact& parent =
                    on_pull ? b.upsert(pull_node_id(repo, number),
                                       ArtifactKind::pull_request, repo)
                            : b.upsert(issue_node_id(repo, number),
                                       ArtifactKind::issue, repo);
                if (parent.title.empty()) {
                    parent.title = string_or_empty(p["issue"], "title");
                }
                if (parent.body.empty()) {
                    parent.body = string_or_empty(p["issue"], "body");
                }
                Artifact& comment = b.upsert(comment_node_id(repo, comment_id),
                                             ArtifactKind::comment, repo);
                comment.body = string_or_empty(p["comment"], "body");
                // Structural edge; recorded as a pending ref so dangling
                // checks go through one path.
                PendingRef ref;
                ref.from_id = comment.id;
                ref.from_kind = ArtifactKind::comment;
                ref.repo = repo;
                ref.link.kind = AutolinkKind::issue;
                ref.link.reference = number;
                ref.structural = true;
                ref.parent_kind = on_pull ? ArtifactKind::pull_request
                                          : ArtifactKind::issue;
                b.refs.push_back(std::move(ref));
                break;
            }
            case GitEventType::pull_request: {
                if (!p.contains("pull_request") || !p["pull_request"].is_object()) {
                    ++stats.missing_fields;
                    break;
                }
                const json& pr = p["pull_request"];
                const std::string number = number_to_string(pr, "number");
                if (number.empty()) {
                    ++stats.missing_fields;
                    break;
                }
                Artifact& node = b.upsert(pull_node_id(repo, number),
                                          ArtifactKind::pull_request, repo);
                node.title = string_or_empty(pr, "title");
                node.body = string_or_empty(pr, "body");
                note_autolinks(node.id, ArtifactKind::pull_request, repo,
                               node.title + "\n" + node.body);
                // Structural pull -> commit references.
                std::vector<std::string> shas;
                shas.push_back(string_or_empty(pr, "merge_commit_sha"));
                if (pr.contains("head") && pr["head"].is_object()) {
                    shas.push_back(string_or_empty(pr["head"], "sha"));
                }
                for (const auto& sha : shas) {
                    if (sha.empty()) continue;
                    PendingRef ref;
                    ref.from_id = node.id;
                    ref.from_kind = ArtifactKind::pull_request;
                    ref.repo = repo;
                    ref.link.kind = AutolinkKind::commit;
                    ref.link.reference = sha;
                    ref.structural = true;
                    b.refs.push_back(std::move(ref));
                }
                break;
            }
            case GitEventType::push: {
                if (!p.contains("commits") || !p["commits"].is_array()) {
                    ++stats.missing_fields;
                    break;
                }
                for (const auto& commit : p["commits"]) {
                    const std::string sha = string_or_empty(commit, "sha");
                    if (sha.empty()) {
                        ++stats.missing_fields;
                        continue;
                    }
                    Artifact& node = b.upsert(commit_node_id(repo, sha),
                                              ArtifactKind::commit, repo);
                    node.body = string_or_empty(commit, "message");
                    b.shas_by_repo[repo].push_back(sha);
                    note_autolinks(node.id, ArtifactKind::commit, repo, node.body);
                }
                break;
            }
        }
    }

    // Resolve references now that every node exists.
    TimGraph graph;
    graph.nodes = b.nodes;
    std::set<std::tuple<int, std::string, std::string>> edge_seen;
    const auto add_edge = [&](TimEdgeKind kind, const std::string& from,
                              const std::string& to) {
        if (edge_seen.insert({static_cast<int>(kind), from, to}).second) {
            graph.edges.push_back({kind, from, to});
        }
    };
    const auto resolve_commit = [&](const std::string& repo,
                                    const std::string& ref) -> std::string {
        const auto it = b.shas_by_repo.find(repo);
        if (it == b.shas_by_repo.end()) return {};
        std::string match;
        for (const auto& sha : it->second) {
            if (sha.rfind(ref, 0) == 0) {
                if (!match.empty() && match != sha) return {};  // ambiguous
                match = sha;
            }
        }
        return match.empty() ? std::string{} : commit_node_id(repo, match);
    };

    for (const auto& ref : b.refs) {
        if (ref.structural && ref.from_kind == ArtifactKind::comment) {
            const bool on_pull = ref.parent_kind == ArtifactKind::pull_request;
            const std::string parent_id =
                on_pull ? pull_node_id(ref.repo, ref.link.reference)
                        : issue_node_id(ref.repo, ref.link.reference);
            if (b.node_index.count(parent_id)) {
                add_edge(on_pull ? TimEdgeKind::comment_pull
                                 : TimEdgeKind::comment_issue,
                         ref.from_id, parent_id);
            } else {
                ++stats.dangling_removed;
            }
            continue;
        }
        if (ref.structural && ref.from_kind == ArtifactKind::pull_request) {
            const std::string commit_id = resolve_commit(ref.repo, ref.link.reference);
            if (!commit_id.empty()) {
                add_edge(TimEdgeKind::pull_commit, ref.from_id, commit_id);
            } else {
                ++stats.dangling_removed;
            }
            continue;
        }

        // Autolink edges; only issue-commit and issue-pull are in the TIM.
        const std::string target_repo =
            ref.link.repo.empty() ? ref.repo : ref.link.repo;
        if (ref.link.kind == AutolinkKind::issue) {
            const std::string issue_id = issue_node_id(target_repo, ref.link.reference);
            const std::string pull_id = pull_node_id(target_repo, ref.link.reference);
            if (ref.from_kind == ArtifactKind::commit &&
                b.node_index.count(issue_id)) {
                add_edge(TimEdgeKind::issue_commit, issue_id, ref.from_id);
            } else if (ref.from_kind == ArtifactKind::issue &&
                       b.node_index.count(pull_id)) {
                add_edge(TimEdgeKind::issue_pull, ref.from_id, pull_id);
            } else if (ref.from_kind == ArtifactKind::pull_request &&
                       b.node_index.count(issue_id)) {
                add_edge(TimEdgeKind::issue_pull, issue_id, ref.from_id);
            } else {
                ++stats.dangling_removed;
            }
        } else {  // commit reference
            if (ref.from_kind != ArtifactKind::issue) {
                ++stats.dangling_removed;
                continue;
            }
            const std::string commit_id = resolve_commit(target_repo, ref.link.reference);
            if (!commit_id.empty()) {
                add_edge(TimEdgeKind::issue_commit, ref.from_id, commit_id);
            } else {
                ++stats.dangling_removed;
            }
        }
    }
    return graph;
}

TimGraph clean_graph(const TimGraph& graph, std::size_t min_tokens,
                     MineStats& stats) {
    TimGraph out;
    std::set<std::string> kept;
    for (const auto& node : graph.nodes) {
        Artifact copy = node;
        copy.tokens = preprocess(artifact_text(copy));
        if (copy.tokens.size() >= min_tokens) {
            kept.insert(copy.id);
            out.nodes.push_back(std::move(copy));
        } else {
            ++stats.short_artifacts_dropped;
        }
    }
    for (const auto& edge : graph.edges) {
        if (kept.count(edge.from_id) && kept.count(edge.to_id)) {
            out.edges.push_back(edge);
        } else {
            ++stats.dangling_removed;
        }
    }
    return out;
}

std::vector<AdjacentPair> derive_adjacent_dataset(const TimGraph& graph,
                                                  std::size_t min_tokens) {
    std::vector<AdjacentPair> pairs;
    for (const auto& edge : graph.edges) {
        if (edge.kind != TimEdgeKind::issue_commit) continue;
        const Artifact* issue = graph.find_node(edge.from_id);
        const Artifact* commit = graph.find_node(edge.to_id);
        if (issue == nullptr || commit == nullptr) continue;
        AdjacentPair pair;
        pair.issue_text = issue->tokens.empty()
                              ? preprocess(artifact_text(*issue))
                              : issue->tokens;
        pair.commit_text = commit->tokens.empty()
                               ? preprocess(artifact_text(*commit))
                               : commit->tokens;
        if (pair.issue_text.size() < min_tokens ||
            pair.commit_text.size() < min_tokens) {
            continue;
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

void save_tim(const TimGraph& graph, const std::string& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "nodes.jsonl");
        if (!out) throw std::runtime_error("cannot write nodes in " + dir);
        for (const auto& node : graph.nodes) {
            ordered_json obj;
            obj["id"] = node.id;
            obj["kind"] = to_string(node.kind);
            obj["title"] = node.title;
            obj["body"] = node.body;
            obj["project_id"] = node.project_id;
            out << obj.dump() << '\n';
        }
    }
    {
        std::ofstream out(fs::path(dir) / "edges.jsonl");
        if (!out) throw std::runtime_error("cannot write edges in " + dir);
        for (const auto& edge : graph.edges) {
            ordered_json obj;
            obj["kind"] = to_string(edge.kind);
            obj["from"] = edge.from_id;
            obj["to"] = edge.to_id;
            out << obj.dump() << '\n';
        }
    }
}

TimGraph load_tim(const std::string& dir) {
    TimGraph graph;
    {
        std::ifstream in(fs::path(dir) / "nodes.jsonl");
        if (!in) throw std::runtime_error("cannot read nodes in " + dir);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const ordered_json obj = ordered_json::parse(line);
            Artifact node;
            node.id = obj.at("id").get<std::string>();
            node.kind = artifact_kind_from_string(obj.at("kind").get<std::string>());
            node.title = obj.at("title").get<std::string>();
            node.body = obj.at("body").get<std::string>();
            node.project_id = obj.at("project_id").get<std::string>();
            graph.nodes.push_back(std::move(node));
        }
    }
    {
        std::ifstream in(fs::path(dir) / "edges.jsonl");
        if (!in) throw std::runtime_error("cannot read edges in " + dir);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const ordered_json obj = ordered_json::parse(line);
            TimEdge edge;
            edge.kind = tim_edge_kind_from_string(obj.at("kind").get<std::string>());
            edge.from_id = obj.at("from").get<std::string>();
            edge.to_id = obj.at("to").get<std::string>();
            graph.edges.push_back(std::move(edge));
        }
    }
    return graph;
}

void save_adjacent_pairs(const std::vector<AdjacentPair>& pairs,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& pair : pairs) {
        ordered_json obj;
        obj["issue_text"] = join_tokens(pair.issue_text);
        obj["commit_text"] = join_tokens(pair.commit_text);
        out << obj.dump() << '\n';
    }
}

std::vector<AdjacentPair> load_adjacent_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::vector<AdjacentPair> pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const ordered_json obj = ordered_json::parse(line);
        AdjacentPair pair;
        pair.issue_text = preprocess(obj.at("issue_text").get<std::string>());
        pair.commit_text = preprocess(obj.at("commit_text").get<std::string>());
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

TraceDataset adjacent_pairs_to_dataset(const std::vector<AdjacentPair>& pairs) {
    TraceDataset d;
    d.name = "adjacent_pairs";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        Artifact issue;
        issue.id = "issue_" + std::to_string(i);
        issue.kind = ArtifactKind::issue;
        issue.body = join_tokens(pairs[i].issue_text);
        issue.tokens = pairs[i].issue_text;
        Artifact commit;
        commit.id = "commit_" + std::to_string(i);
        commit.kind = ArtifactKind::commit;
        commit.body = join_tokens(pairs[i].commit_text);
        commit.tokens = pairs[i].commit_text;
        d.sources.push_back(std::move(issue));
        d.targets.push_back(std::move(commit));
        d.links.push_back({"issue_" + std::to_string(i), "commit_" + std::to_string(i),
                           LinkLabel::positive, LinkOrigin::mined_autolink});
    }
    return d;
}

}  // namespace tracekit
