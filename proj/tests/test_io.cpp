#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "tracekit/io.hpp"
#include "tracekit/preprocess.hpp"

using namespace tracekit;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "tracekit_io_test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("empty artifact file loads as empty") {
    const auto path = temp_dir() / "empty.jsonl";
    write_file(path, "");
    CHECK(load_artifacts(path.string()).empty());
}

TEST_CASE("artifact round-trip is identity") {
    std::vector<Artifact> artifacts;
    Artifact a;
    a.id = "R-1";
    a.kind = ArtifactKind::requirement;
    a.title = "Title \"quoted\"";
    a.body = "body with\nnewline";
    a.project_id = "proj";
    artifacts.push_back(a);
    a.id = "R-2";
    a.kind = ArtifactKind::design;
    a.title = "";
    a.body = "plain";
    artifacts.push_back(a);

    const auto path = temp_dir() / "artifacts.jsonl";
    save_artifacts(artifacts, path.string());
    const auto loaded = load_artifacts(path.string());
    REQUIRE(loaded.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(loaded[i].id == artifacts[i].id);
        CHECK(loaded[i].kind == artifacts[i].kind);
        CHECK(loaded[i].title == artifacts[i].title);
        CHECK(loaded[i].body == artifacts[i].body);
        CHECK(loaded[i].project_id == artifacts[i].project_id);
    }

    // Byte-stable on re-save.
    const auto path2 = temp_dir() / "artifacts2.jsonl";
    save_artifacts(loaded, path2.string());
    std::ifstream f1(path), f2(path2);
    const std::string c1((std::istreambuf_iterator<char>(f1)), {});
    const std::string c2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(c1 == c2);
}

TEST_CASE("missing id reports the line number") {
    const auto path = temp_dir() / "bad.jsonl";
    write_file(path,
               R"({"id":"a","kind":"generic","title":"","body":"x","project_id":"p"})"
               "\n"
               R"({"kind":"generic","title":"","body":"y","project_id":"p"})"
               "\n");
    CHECK_THROWS_WITH_AS(load_artifacts(path.string()),
                         doctest::Contains(":2:"), std::runtime_error);
}

TEST_CASE("duplicate id is rejected") {
    const auto path = temp_dir() / "dup.jsonl";
    write_file(path,
               R"({"id":"a","kind":"generic","title":"","body":"x","project_id":"p"})"
               "\n"
               R"({"id":"a","kind":"generic","title":"","body":"y","project_id":"p"})"
               "\n");
    CHECK_THROWS_WITH_AS(load_artifacts(path.string()),
                         doctest::Contains("duplicate id"), std::runtime_error);
}

TEST_CASE("links round-trip in CSV and JSONL") {
    std::vector<TraceLink> links;
    links.push_back({"s1", "t1", LinkLabel::positive, LinkOrigin::answer_set});
    links.push_back({"s2", "t2", LinkLabel::negative, LinkOrigin::answer_set});

    for (const char* name : {"links.csv", "links.jsonl"}) {
        const auto path = temp_dir() / name;
        save_links(links, path.string());
        const auto loaded = load_links(path.string());
        REQUIRE(loaded.size() == 2);
        CHECK(loaded[0].source_id == "s1");
        CHECK(loaded[0].label == LinkLabel::positive);
        CHECK(loaded[1].label == LinkLabel::negative);
    }
}

TEST_CASE("malformed CSV link line is reported") {
    const auto path = temp_dir() / "bad.csv";
    write_file(path, "source_id,target_id,label\ns1,t1\n");
    CHECK_THROWS_WITH_AS(load_links(path.string()), doctest::Contains(":2:"),
                         std::runtime_error);
}

TEST_CASE("corpus round-trips token content and skips empty lines") {
    Corpus corpus;
    corpus.source_tag = CorpusTag::background;
    corpus.documents.push_back(preprocess("the quick brown fox"));
    corpus.documents.push_back(preprocess("jumps over lazy dogs"));

    const auto path = temp_dir() / "corpus.txt";
    save_corpus(corpus, path.string());
    write_file(temp_dir() / "gap.txt", "one doc\n\n\ntwo doc\n");

    const Corpus loaded = load_corpus(path.string(), CorpusTag::background);
    REQUIRE(loaded.documents.size() == 2);
    CHECK(loaded.documents[0] == corpus.documents[0]);

    const Corpus gaps = load_corpus((temp_dir() / "gap.txt").string(),
                                    CorpusTag::background);
    CHECK(gaps.documents.size() == 2);  // no empty documents
}

TEST_CASE("prediction file round-trip") {
    std::vector<Prediction> preds = {{"s1", "t1", 0.75}, {"s1", "t2", -0.25}};
    const auto path = temp_dir() / "preds.jsonl";
    save_predictions(preds, path.string());
    const auto loaded = load_predictions(path.string());
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].score == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(loaded[1].score == doctest::Approx(-0.25).epsilon(1e-15));
}

TEST_CASE("dataset load validates endpoints") {
    const auto dir = temp_dir();
    write_file(dir / "s.jsonl",
               R"({"id":"s1","kind":"requirement","title":"","body":"a b c d e f g h i j","project_id":"p"})"
               "\n");
    write_file(dir / "t.jsonl",
               R"({"id":"t1","kind":"design","title":"","body":"a b c d e f g h i j","project_id":"p"})"
               "\n");
    write_file(dir / "l.csv", "source_id,target_id,label\ns1,t1,1\n");
    const TraceDataset d = load_dataset((dir / "s.jsonl").string(),
                                        (dir / "t.jsonl").string(),
                                        (dir / "l.csv").string(), "demo");
    CHECK(d.sources.size() == 1);
    CHECK(d.links.size() == 1);

    write_file(dir / "l_bad.csv", "source_id,target_id,label\ns1,t9,1\n");
    CHECK_THROWS(load_dataset((dir / "s.jsonl").string(), (dir / "t.jsonl").string(),
                              (dir / "l_bad.csv").string(), "demo"));
}
