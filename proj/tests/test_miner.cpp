#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tracekit/gh_miner.hpp"
#include "tracekit/preprocess.hpp"

using namespace tracekit;

TEST_CASE("event stream parsing: mapping, skipping, robustness") {
    std::stringstream in;
    in << R"({"type":"IssuesEvent","repo":{"name":"o/r"},"created_at":"2021-01-01T00:00:00Z","payload":{"issue":{"number":1,"title":"t","body":"b"}}})"
       << "\n"
       << R"({"type":"WatchEvent","repo":{"name":"o/r"},"payload":{}})" << "\n"
       << "{truncated json\n"
       << R"({"type":"PushEvent","repo":{"name":"o/r"},"payload":{"commits":[{"sha":"abc","message":"m"}]}})"
       << "\n";
    MineStats stats;
    const auto events = parse_event_stream(in, stats);
    REQUIRE(events.size() == 2);
    CHECK(events[0].type == GitEventType::issues);
    CHECK(events[1].type == GitEventType::push);
    CHECK(events[0].repo == "o/r");
    CHECK(stats.recognized_events == 2);
    CHECK(stats.skipped_event_types == 1);
    CHECK(stats.parse_errors == 1);
}

TEST_CASE("autolink extraction rules") {
    // Dedup keeps the first occurrence.
    auto links = extract_autolinks("fixes #12 and #12", "o/r");
    REQUIRE(links.size() == 1);
    CHECK(links[0].kind == AutolinkKind::issue);
    CHECK(links[0].reference == "12");
    CHECK(links[0].repo.empty());

    // The paper's 7-digit sha example.
    links = extract_autolinks("see a5c3785", "o/r");
    REQUIRE(links.size() == 1);
    CHECK(links[0].kind == AutolinkKind::commit);
    CHECK(links[0].reference == "a5c3785");

    // Non-digit after '#', hex run too short.
    CHECK(extract_autolinks("version #x and cafe12", "o/r").empty());

    // No digit in the run; length bounds; word boundaries.
    CHECK(extract_autolinks("deedbee is a word", "o/r").empty());
    CHECK(extract_autolinks("x1234567 glued", "o/r").empty());
    CHECK(extract_autolinks("1234567x glued", "o/r").empty());
    CHECK(extract_autolinks("#12abc not bounded", "o/r").empty());
    const std::string long_run(41, 'a');
    CHECK(extract_autolinks(long_run + "1", "o/r").empty());

    // Cross-repo form carries its qualifier.
    links = extract_autolinks("tracked in acme/beta#7 now", "o/r");
    REQUIRE(links.size() == 1);
    CHECK(links[0].repo == "acme/beta");
    CHECK(links[0].reference == "7");

    // The '#'-digits span is not re-read as a hex run.
    links = extract_autolinks("refs #1234567 only", "o/r");
    REQUIRE(links.size() == 1);
    CHECK(links[0].kind == AutolinkKind::issue);

    // No '#' and no hex run of length >= 7 -> empty.
    CHECK(extract_autolinks("plain prose without references", "o/r").empty());
    CHECK(extract_autolinks("", "o/r").empty());
}

namespace {

std::vector<GitEvent> events_from(const std::string& text, MineStats& stats) {
    std::stringstream in(text);
    return parse_event_stream(in, stats);
}

std::string issue_event(int number, const std::string& body,
                        const std::string& ts = "2021-01-01T00:00:00Z") {
    nlohmann::json j = {
        {"type", "IssuesEvent"},
        {"repo", {{"name", "o/r"}}},
        {"created_at", ts},
        {"payload", {{"issue", {{"number", number}, {"title", "issue title here"},
                                {"body", body}}}}}};
    return j.dump();
}

std::string push_event(const std::string& sha, const std::string& message,
                       const std::string& ts = "2021-01-01T01:00:00Z") {
    nlohmann::json j = {
        {"type", "PushEvent"},
        {"repo", {{"name", "o/r"}}},
        {"created_at", ts},
        {"payload", {{"commits", {{{"sha", sha}, {"message", message}}}}}}};
    return j.dump();
}

}  // namespace

TEST_CASE("two-event fixture: issue + closing commit becomes one edge") {
    MineStats stats;
    const std::string sha(40, '7');
    const auto events = events_from(
        issue_event(1, "the dispatcher drops retries on saturation") + "\n" +
            push_event(sha, "closes #1 by resizing the retry queue"),
        stats);
    const TimGraph graph = build_tim(events, stats);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].kind == TimEdgeKind::issue_commit);
    CHECK(graph.edges[0].from_id == "o/r#1");
    CHECK(graph.edges[0].to_id == "o/r@" + sha);
    CHECK(graph.nodes.size() == 2);
}

TEST_CASE("comment nesting produces comment edges") {
    nlohmann::json j = {
        {"type", "IssueCommentEvent"},
        {"repo", {{"name", "o/r"}}},
        {"created_at", "2021-01-01T02:00:00Z"},
        {"payload",
         {{"issue", {{"number", 5}, {"title", "t"}, {"body", "b"}}},
          {"comment", {{"id", 900}, {"body", "agree with this"}}}}}};
    MineStats stats;
    const auto events = events_from(j.dump(), stats);
    const TimGraph graph = build_tim(events, stats);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0].kind == TimEdgeKind::comment_issue);
    CHECK(graph.edges[0].from_id == "o/r/comment/900");
    CHECK(graph.edges[0].to_id == "o/r#5");

    // Same payload but flagged as a pull comment.
    j["payload"]["issue"]["pull_request"] = nlohmann::json::object();
    MineStats stats2;
    const auto events2 = events_from(j.dump(), stats2);
    const TimGraph graph2 = build_tim(events2, stats2);
    REQUIRE(graph2.edges.size() == 1);
    CHECK(graph2.edges[0].kind == TimEdgeKind::comment_pull);
}

TEST_CASE("autolink to a nonexistent issue leaves no edge") {
    MineStats stats;
    const auto events = events_from(
        push_event(std::string(40, '3'), "refs #99 which does not exist"), stats);
    const TimGraph graph = build_tim(events, stats);
    CHECK(graph.edges.empty());
    CHECK(stats.dangling_removed == 1);
}

TEST_CASE("later events overwrite artifact text (last write wins)") {
    MineStats stats;
    const auto events = events_from(
        issue_event(1, "original body text", "2021-01-01T00:00:00Z") + "\n" +
            issue_event(1, "edited body text", "2021-01-02T00:00:00Z"),
        stats);
    const TimGraph graph = build_tim(events, stats);
    REQUIRE(graph.nodes.size() == 1);
    CHECK(graph.nodes[0].body == "edited body text");

    // Deterministic: same stream, same graph.
    MineStats stats2;
    const auto events2 = events_from(
        issue_event(1, "original body text", "2021-01-01T00:00:00Z") + "\n" +
            issue_event(1, "edited body text", "2021-01-02T00:00:00Z"),
        stats2);
    const TimGraph graph2 = build_tim(events2, stats2);
    CHECK(graph2.nodes[0].body == graph.nodes[0].body);
    CHECK(graph2.edges.size() == graph.edges.size());
}

TEST_CASE("adjacent pairs come from issue-commit edges only") {
    MineStats stats;
    const std::string sha(40, '5');
    std::string stream =
        issue_event(1, "the exporter stalls once the dataset crosses the limit") +
        "\n" +
        push_event(sha,
                   "closes #1 by chunking the dataset into bounded segments");
    // A pull with an issue reference: issue_pull edge, no adjacent pair.
    nlohmann::json pull = {
        {"type", "PullRequestEvent"},
        {"repo", {{"name", "o/r"}}},
        {"created_at", "2021-01-01T02:00:00Z"},
        {"payload",
         {{"pull_request",
           {{"number", 44}, {"title", "pull title for the exporter"},
            {"body", "resolves #1 with a bounded segment based exporter"}}}}}};
    stream += "\n" + pull.dump();

    const auto events = events_from(stream, stats);
    TimGraph graph = build_tim(events, stats);
    graph = clean_graph(graph, 5, stats);
    const auto pairs = derive_adjacent_dataset(graph, 5);
    REQUIRE(pairs.size() == 1);
    CHECK(!pairs[0].issue_text.empty());
    CHECK(!pairs[0].commit_text.empty());

    // The 10-token rule drops pairs with a short side.
    const auto strict = derive_adjacent_dataset(graph, 50);
    CHECK(strict.empty());
}

TEST_CASE("tim graph and adjacent pairs round-trip through files") {
    MineStats stats;
    const std::string sha(40, '9');
    const auto events = events_from(
        issue_event(3, "watchdog restarts the agent loop before lease renewal") +
            "\n" + push_event(sha, "fixes #3 by renewing the lease earlier"),
        stats);
    const TimGraph graph = build_tim(events, stats);

    const auto dir = std::filesystem::temp_directory_path() / "tracekit_tim";
    std::filesystem::remove_all(dir);
    save_tim(graph, dir.string());
    const TimGraph loaded = load_tim(dir.string());
    REQUIRE(loaded.nodes.size() == graph.nodes.size());
    REQUIRE(loaded.edges.size() == graph.edges.size());
    CHECK(loaded.edges[0].kind == graph.edges[0].kind);
    CHECK(loaded.nodes[0].id == graph.nodes[0].id);

    const auto pairs_path = (dir / "pairs.jsonl").string();
    MineStats s2;
    TimGraph cleaned = clean_graph(graph, 5, s2);
    const auto pairs = derive_adjacent_dataset(cleaned, 5);
    save_adjacent_pairs(pairs, pairs_path);
    const auto back = load_adjacent_pairs(pairs_path);
    REQUIRE(back.size() == pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CHECK(back[i].issue_text == pairs[i].issue_text);
        CHECK(back[i].commit_text == pairs[i].commit_text);
    }
}

TEST_CASE("golden file: 200-event fixture counts match exactly") {
    std::ifstream fixture("fixtures/gh_events.jsonl");
    REQUIRE(fixture.good());
    std::ifstream expected_in("fixtures/gh_expected.json");
    REQUIRE(expected_in.good());
    const nlohmann::json expected = nlohmann::json::parse(expected_in);

    MineStats stats;
    const auto events = parse_event_stream(fixture, stats);
    CHECK(stats.recognized_events == expected["recognized_events"]);
    CHECK(stats.skipped_event_types == expected["skipped_event_types"]);
    CHECK(stats.parse_errors == expected["parse_errors"]);

    const TimGraph graph = build_tim(events, stats);
    CHECK(stats.missing_fields == expected["missing_fields"]);
    CHECK(stats.autolinks_extracted == expected["autolinks_extracted"]);
    CHECK(graph.nodes.size() == expected["nodes_built"]);
    CHECK(stats.dangling_removed == expected["dangling_removed_build"]);
    const auto counts = graph.edge_counts();
    for (const auto& [kind, count] : expected["edges_built"].items()) {
        CHECK_MESSAGE(counts.count(kind) == 1, kind);
        if (counts.count(kind)) {
            CHECK_MESSAGE(counts.at(kind) == count.get<std::size_t>(), kind);
        }
    }

    const TimGraph cleaned = clean_graph(graph, 10, stats);
    CHECK(stats.short_artifacts_dropped == expected["short_artifacts_dropped"]);
    CHECK(stats.dangling_removed == expected["dangling_removed_total"]);
    CHECK(cleaned.nodes.size() == expected["cleaned_nodes"]);
    const auto cleaned_counts = cleaned.edge_counts();
    for (const auto& [kind, count] : expected["cleaned_edges"].items()) {
        if (count.get<std::size_t>() == 0) continue;
        CHECK_MESSAGE(cleaned_counts.at(kind) == count.get<std::size_t>(), kind);
    }

    // No dangling edges remain.
    for (const auto& edge : cleaned.edges) {
        CHECK(cleaned.find_node(edge.from_id) != nullptr);
        CHECK(cleaned.find_node(edge.to_id) != nullptr);
    }

    const auto pairs = derive_adjacent_dataset(cleaned, 10);
    CHECK(pairs.size() == expected["adjacent_pairs"]);
    for (const auto& pair : pairs) {
        CHECK(pair.issue_text.size() >= 10);
        CHECK(pair.commit_text.size() >= 10);
    }
}
