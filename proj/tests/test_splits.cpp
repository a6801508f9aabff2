#include "doctest.h"

#include <filesystem>
#include <set>

#include "tracekit/preprocess.hpp"
#include "tracekit/ranking.hpp"
#include "tracekit/rng.hpp"
#include "tracekit/splits.hpp"

using namespace tracekit;

namespace {

// n_sources x n_targets dataset with `positives` planted links.
TraceDataset grid_dataset(std::size_t n_sources, std::size_t n_targets,
                          std::size_t positives, std::uint64_t seed = 400) {
    TraceDataset d;
    d.name = "grid";
    const auto add = [](std::vector<Artifact>& xs, const std::string& id) {
        Artifact a;
        a.id = id;
        a.body = "token filler body text for " + id;
        a.tokens = preprocess(a.body);
        xs.push_back(std::move(a));
    };
    for (std::size_t i = 0; i < n_sources; ++i) {
        add(d.sources, "s" + std::to_string(100 + i));
    }
    for (std::size_t i = 0; i < n_targets; ++i) {
        add(d.targets, "t" + std::to_string(100 + i));
    }
    std::vector<PairKey> all;
    for (const auto& s : d.sources) {
        for (const auto& t : d.targets) all.push_back({s.id, t.id});
    }
    Rng rng = make_rng(seed);
    shuffle(all, rng);
    for (std::size_t i = 0; i < positives && i < all.size(); ++i) {
        d.links.push_back(
            {all[i].first, all[i].second, LinkLabel::positive, LinkOrigin::answer_set});
    }
    return d;
}

std::size_t count_label(const std::vector<LabeledPair>& pairs, LinkLabel label) {
    std::size_t n = 0;
    for (const auto& p : pairs) n += p.label == label ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("split_by_link covers the candidate set with disjoint partitions") {
    const TraceDataset d = grid_dataset(6, 9, 13);
    const TaskSplit split = split_by_link(d, 42);

    PairSet seen;
    std::size_t total = 0;
    for (const PhaseView* v : {&split.train, &split.valid, &split.test}) {
        for (const auto& p : v->pairs) {
            CHECK(seen.insert({p.source_id, p.target_id}).second);  // disjoint
            ++total;
        }
    }
    CHECK(total == 6 * 9);

    // Fold sizes balanced to +-1.
    std::vector<std::size_t> fold_sizes(10, 0);
    for (const auto& [key, fold] : split.fold_assignment) ++fold_sizes[fold];
    const auto [lo, hi] = std::minmax_element(fold_sizes.begin(), fold_sizes.end());
    CHECK(*hi - *lo <= 1);

    // All artifacts visible in every phase.
    CHECK(split.train.visible_sources.size() == 6);
    CHECK(split.test.visible_targets.size() == 9);
}

TEST_CASE("split_by_link 10 pairs at (8,1,1) gives 8/1/1") {
    const TraceDataset d = grid_dataset(2, 5, 3);
    const TaskSplit split = split_by_link(d, 7);
    CHECK(split.train.pairs.size() == 8);
    CHECK(split.valid.pairs.size() == 1);
    CHECK(split.test.pairs.size() == 1);
}

TEST_CASE("split_by_link balances positives like the 4052-link arithmetic") {
    // 4052 positives inside a 80x60 grid (4800 pairs).
    const TraceDataset d = grid_dataset(80, 60, 4052);
    const TaskSplit split = split_by_link(d, 3);

    const std::size_t train_pos = count_label(split.train.pairs, LinkLabel::positive);
    const std::size_t valid_pos = count_label(split.valid.pairs, LinkLabel::positive);
    const std::size_t test_pos = count_label(split.test.pairs, LinkLabel::positive);
    CHECK(train_pos + valid_pos + test_pos == 4052);
    CHECK(std::abs(static_cast<long>(train_pos) - 3241L) <= 1);
    CHECK(std::abs(static_cast<long>(valid_pos) - 405L) <= 1);
    CHECK(std::abs(static_cast<long>(test_pos) - 406L) <= 1);
}

TEST_CASE("split_by_link determinism and seed sensitivity") {
    const TraceDataset d = grid_dataset(6, 9, 13);
    const TaskSplit a = split_by_link(d, 42);
    const TaskSplit b = split_by_link(d, 42);
    CHECK(a.fold_assignment == b.fold_assignment);

    const TaskSplit c = split_by_link(d, 43);
    CHECK(a.fold_assignment != c.fold_assignment);
}

TEST_CASE("split assignment must sum to fold count") {
    const TraceDataset d = grid_dataset(6, 9, 13);
    SplitOptions opts;
    opts.assignment = {7, 1, 1};
    CHECK_THROWS(split_by_link(d, 1, opts));
}

TEST_CASE("split_by_artifact partitions sources and keeps targets whole") {
    const TraceDataset d = grid_dataset(10, 7, 20);
    const TaskSplit split = split_by_artifact(d, 5);

    CHECK(split.train.visible_sources.size() == 8);
    CHECK(split.valid.visible_sources.size() == 1);
    CHECK(split.test.visible_sources.size() == 1);

    // Cartesian rule: |phase pairs| = |phase sources| x |T|.
    CHECK(split.train.pairs.size() == 8 * 7);
    CHECK(split.valid.pairs.size() == 1 * 7);
    CHECK(split.test.pairs.size() == 1 * 7);

    // No test source in training; targets identical across phases.
    std::set<std::string> train_sources(split.train.visible_sources.begin(),
                                        split.train.visible_sources.end());
    for (const auto& s : split.test.visible_sources) {
        CHECK(train_sources.count(s) == 0);
    }
    CHECK(split.train.visible_targets == split.test.visible_targets);
    CHECK(split.train.visible_targets.size() == 7);
}

TEST_CASE("split_by_artifact equal mode matches the 22-source arithmetic") {
    const TraceDataset d = grid_dataset(22, 5, 15);
    SplitOptions opts;
    opts.mode = PartitionMode::equal;
    const TaskSplit split = split_by_artifact(d, 9, opts);
    CHECK(split.train.visible_sources.size() == 7);
    CHECK(split.valid.visible_sources.size() == 7);
    CHECK(split.test.visible_sources.size() == 8);
}

TEST_CASE("split_by_artifact falls back to equal mode on tiny source sets") {
    const TraceDataset d = grid_dataset(6, 5, 8);
    const TaskSplit split = split_by_artifact(d, 9);  // automatic
    CHECK(split.train.visible_sources.size() == 2);
    CHECK(split.valid.visible_sources.size() == 2);
    CHECK(split.test.visible_sources.size() == 2);
}

TEST_CASE("generation split masks all but exactly `shots` positives") {
    const TraceDataset d = grid_dataset(20, 10, 40);

    for (const std::size_t shots : {std::size_t{0}, std::size_t{10}}) {
        const TaskSplit split = make_generation_split(d, shots, 17);
        CHECK(split.task == TracingTask::TLG);
        CHECK(split.shots == shots);
        CHECK(count_label(split.train.pairs, LinkLabel::positive) == shots);
        CHECK(count_label(split.train.pairs, LinkLabel::negative) == 0);
        // Texts stay visible for self-supervised use.
        CHECK(!split.train.visible_sources.empty());
        CHECK(split.train.visible_targets.size() == 10);
        // Valid/test labels unmasked.
        CHECK(count_label(split.valid.pairs, LinkLabel::unknown) == 0);
        CHECK(count_label(split.test.pairs, LinkLabel::unknown) == 0);
    }

    const TaskSplit a = make_generation_split(d, 10, 17);
    const TaskSplit b = make_generation_split(d, 10, 17);
    CHECK(a.truth(a.train) == b.truth(b.train));

    CHECK_THROWS_WITH_AS(make_generation_split(d, 4000, 17),
                         doctest::Contains("shots"), std::runtime_error);
}

TEST_CASE("replicate_splits derives distinct deterministic splits") {
    const TraceDataset d = grid_dataset(10, 8, 25);
    const auto splits = replicate_splits(d, TracingTask::TLC, 5, 1000);
    CHECK(splits.size() == 5);
    for (std::size_t i = 1; i < splits.size(); ++i) {
        CHECK(splits[0].fold_assignment != splits[i].fold_assignment);
    }
    const auto single = split_by_link(d, 1000);
    CHECK(splits[0].fold_assignment == single.fold_assignment);

    const auto again = replicate_splits(d, TracingTask::TLC, 5, 1000);
    for (std::size_t i = 0; i < splits.size(); ++i) {
        CHECK(splits[i].fold_assignment == again[i].fold_assignment);
    }
}

TEST_CASE("split save/load round-trip") {
    const TraceDataset d = grid_dataset(10, 6, 18);
    const TaskSplit split = make_generation_split(d, 5, 23);

    const auto dir = std::filesystem::temp_directory_path() / "tracekit_split_test";
    std::filesystem::remove_all(dir);
    save_split(split, dir.string());
    const TaskSplit loaded = load_split(dir.string());

    CHECK(loaded.task == split.task);
    CHECK(loaded.seed == split.seed);
    CHECK(loaded.shots == split.shots);
    CHECK(loaded.fold_assignment == split.fold_assignment);
    CHECK(loaded.train.visible_sources == split.train.visible_sources);
    REQUIRE(loaded.train.pairs.size() == split.train.pairs.size());
    for (std::size_t i = 0; i < loaded.train.pairs.size(); ++i) {
        CHECK(loaded.train.pairs[i].source_id == split.train.pairs[i].source_id);
        CHECK(loaded.train.pairs[i].label == split.train.pairs[i].label);
    }
}

TEST_CASE("rank_candidates orders by cosine with lexicographic ties") {
    TraceDataset d;
    const auto add = [](std::vector<Artifact>& xs, const std::string& id,
                        const std::string& text) {
        Artifact a;
        a.id = id;
        a.body = text;
        a.tokens = preprocess(text);
        xs.push_back(std::move(a));
    };
    add(d.sources, "s1", "alpha beta gamma");
    add(d.targets, "t1", "alpha beta gamma");   // identical -> rank 1
    add(d.targets, "t2", "alpha beta other");
    add(d.targets, "t3", "unrelated words here");
    d.links.push_back({"s1", "t1", LinkLabel::positive, LinkOrigin::answer_set});

    const TaskSplit split = split_by_link(d, 3, SplitOptions{1, {1, 0, 0}});
    const VsmIndex index = fit_vsm(d);
    const auto preds = rank_candidates(index, split.train);
    REQUIRE(preds.size() == 3);
    CHECK(preds[0].target_id == "t1");
    CHECK(preds[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(preds[1].target_id == "t2");

    // A pair referencing an unknown artifact is an error.
    PhaseView bogus;
    bogus.pairs.push_back({"s1", "missing", LinkLabel::negative});
    CHECK_THROWS(rank_candidates(index, bogus));
}

TEST_CASE("3x3 toy corpus ordering matches the exhaustive oracle") {
    TraceDataset d;
    const auto add = [](std::vector<Artifact>& xs, const std::string& id,
                        const std::string& text) {
        Artifact a;
        a.id = id;
        a.body = text;
        a.tokens = preprocess(text);
        xs.push_back(std::move(a));
    };
    add(d.sources, "s1", "engine torque curve");
    add(d.sources, "s2", "wing lift drag");
    add(d.sources, "s3", "battery charge cycle");
    add(d.targets, "t1", "torque engine rpm");
    add(d.targets, "t2", "lift wing span");
    add(d.targets, "t3", "charge battery pack");

    const VsmIndex index = fit_vsm(d);
    PhaseView all;
    for (const auto& s : d.sources) {
        for (const auto& t : d.targets) {
            all.pairs.push_back({s.id, t.id, LinkLabel::negative});
        }
    }
    const auto preds = rank_candidates(index, all);

    // Exhaustive pairwise oracle.
    std::vector<Prediction> expected;
    for (const auto& s : d.sources) {
        for (const auto& t : d.targets) {
            expected.push_back(
                {s.id, t.id, cosine(index.vector_for(s.id), index.vector_for(t.id))});
        }
    }
    sort_predictions(expected);
    REQUIRE(preds.size() == expected.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        CHECK(preds[i].source_id == expected[i].source_id);
        CHECK(preds[i].target_id == expected[i].target_id);
        CHECK(preds[i].score == expected[i].score);
    }
    // Matched topics rank first for each source.
    CHECK(preds[0].source_id == "s1");
    CHECK(preds[0].target_id == "t1");
}
