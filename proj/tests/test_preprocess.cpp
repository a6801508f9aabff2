#include "doctest.h"

#include "tracekit/preprocess.hpp"

using namespace tracekit;

TEST_CASE("plain text tokenizes lowercase") {
    CHECK(preprocess("Fix NPE in parser") == TokenList{"fix", "npe", "in", "parser"});
}

TEST_CASE("fenced code blocks are stripped") {
    CHECK(preprocess("See ```int x=1;``` above") == TokenList{"see", "above"});
    CHECK(preprocess("```\nwhole block\n```") == TokenList{});
    // Unterminated fence drops the rest.
    CHECK(preprocess("keep ```int x;") == TokenList{"keep"});
}

TEST_CASE("non-ascii codepoints are dropped") {
    CHECK(preprocess("caf\xc3\xa9 \xe2\x98\x83") == TokenList{"caf"});
    CHECK(preprocess("") == TokenList{});
    CHECK(preprocess("\xe2\x98\x83\xe2\x98\x83") == TokenList{});
}

TEST_CASE("stack trace lines are removed") {
    const std::string text =
        "NPE happened\n"
        "  at com.example.Parser.parse(Parser.java:42)\n"
        "  at com.example.Main.run(Main.java:7)\n"
        "please fix";
    CHECK(preprocess(text) == TokenList{"npe", "happened", "please", "fix"});

    CHECK(preprocess("Traceback (most recent call last):\nreal text") ==
          TokenList{"real", "text"});

    // "at" without indentation or a dotted callee is ordinary prose.
    CHECK(preprocess("met at noon(ish)") == TokenList{"met", "at", "noon", "ish"});
}

TEST_CASE("preprocess is idempotent on its own joined output") {
    const std::vector<std::string> inputs = {
        "Fix NPE in parser",
        "See ```int x=1;``` above",
        "caf\xc3\xa9 \xe2\x98\x83",
        "NPE\n  at a.b.c(D.java)\nTraceback (most recent call last):\nok",
        "punct-u-ation, splits; EVERY where 123abc",
    };
    for (const auto& text : inputs) {
        const TokenList once = preprocess(text);
        const TokenList twice = preprocess(join_tokens(once));
        CHECK(once == twice);
    }
}

TEST_CASE("artifact text places the title first") {
    Artifact a;
    a.title = "Crash on startup";
    a.body = "the app crashes";
    CHECK(preprocess(artifact_text(a)) ==
          TokenList{"crash", "on", "startup", "the", "app", "crashes"});
    a.title.clear();
    CHECK(preprocess(artifact_text(a)) == TokenList{"the", "app", "crashes"});
}

namespace {

TraceDataset tiny_dataset() {
    TraceDataset d;
    const auto add = [](std::vector<Artifact>& xs, const std::string& id, int tokens) {
        Artifact a;
        a.id = id;
        std::string body;
        for (int i = 0; i < tokens; ++i) body += "tok" + std::to_string(i) + " ";
        a.body = body;
        a.tokens = preprocess(body);
        xs.push_back(std::move(a));
    };
    add(d.sources, "s1", 10);
    add(d.sources, "s2", 9);
    add(d.targets, "t1", 12);
    add(d.targets, "t2", 3);
    d.links.push_back({"s1", "t1", LinkLabel::positive, LinkOrigin::answer_set});
    d.links.push_back({"s1", "t2", LinkLabel::positive, LinkOrigin::answer_set});
    d.links.push_back({"s2", "t1", LinkLabel::positive, LinkOrigin::answer_set});
    return d;
}

}  // namespace

TEST_CASE("short artifacts and their links are filtered") {
    const TraceDataset d = tiny_dataset();
    const TraceDataset f = filter_short_artifacts(d);

    CHECK(f.sources.size() == 1);  // s2 has 9 tokens -> removed
    CHECK(f.sources[0].id == "s1");
    CHECK(f.targets.size() == 1);  // t2 has 3 tokens -> removed
    CHECK(f.links.size() == 1);    // only s1->t1 survives
    CHECK(f.links[0].source_id == "s1");
    CHECK(f.links[0].target_id == "t1");
    CHECK_NOTHROW(f.validate());

    // Input untouched; counts never increase.
    CHECK(d.sources.size() == 2);
    CHECK(f.sources.size() + f.targets.size() <= d.sources.size() + d.targets.size());
    CHECK(f.links.size() <= d.links.size());
}

TEST_CASE("boundary: exactly min_tokens is retained") {
    TraceDataset d = tiny_dataset();
    const TraceDataset f = filter_short_artifacts(d, 10);
    for (const auto& a : f.sources) CHECK(a.tokens.size() >= 10);
    for (const auto& a : f.targets) CHECK(a.tokens.size() >= 10);
    // s1 has exactly 10 tokens and stays.
    CHECK(f.find_source("s1") != nullptr);
}
