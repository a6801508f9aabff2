#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tracekit {

using TokenList = std::vector<std::string>;

enum class ArtifactKind {
    requirement,
    design,
    issue,
    commit,
    pull_request,
    comment,
    generic,
};

enum class LinkLabel { positive, negative, unknown };

enum class LinkOrigin { answer_set, mined_autolink, few_shot_example };

const char* to_string(ArtifactKind kind);
ArtifactKind artifact_kind_from_string(const std::string& s);

// One natural-language unit. `tokens` is empty until preprocessing runs.
struct Artifact {
    std::string id;
    ArtifactKind kind = ArtifactKind::generic;
    std::string title;
    std::string body;
    std::string project_id;
    TokenList tokens;
};

struct TraceLink {
    std::string source_id;
    std::string target_id;
    LinkLabel label = LinkLabel::positive;
    LinkOrigin origin = LinkOrigin::answer_set;
};

// A project P = (S, T, L).
struct TraceDataset {
    std::string name;
    std::vector<Artifact> sources;
    std::vector<Artifact> targets;
    std::vector<TraceLink> links;

    const Artifact* find_source(const std::string& id) const;
    const Artifact* find_target(const std::string& id) const;
    const Artifact* find_artifact(const std::string& id) const;

    // Throws std::runtime_error on duplicate ids, dangling link endpoints,
    // or a link whose source and target ids coincide.
    void validate() const;
};

enum class CorpusTag { git_mined, project_artifacts, harvested_domain, background };

struct Corpus {
    std::vector<TokenList> documents;
    CorpusTag source_tag = CorpusTag::background;
};

// A scored candidate link; the unit of ranking and thresholding.
struct Prediction {
    std::string source_id;
    std::string target_id;
    double score = 0.0;
};

// Sorts per source by descending score with (source_id, target_id)
// lexicographic tiebreak. Shared by every model so rankings are reproducible.
void sort_predictions(std::vector<Prediction>& preds);

}  // namespace tracekit
