#include "tracekit/types.hpp"

#include <algorithm>
#include <unordered_set>

namespace tracekit {

const char* to_string(ArtifactKind kind) {
    switch (kind) {
        case ArtifactKind::requirement: return "requirement";
        case ArtifactKind::design: return "design";
        case ArtifactKind::issue: return "issue";
        case ArtifactKind::commit: return "commit";
        case ArtifactKind::pull_request: return "pull_request";
        case ArtifactKind::comment: return "comment";
        case ArtifactKind::generic: return "generic";
    }
    return "generic";
}

ArtifactKind artifact_kind_from_string(const std::string& s) {
    if (s == "requirement") return ArtifactKind::requirement;
    if (s == "design") return ArtifactKind::design;
    if (s == "issue") return ArtifactKind::issue;
    if (s == "commit") return ArtifactKind::commit;
    if (s == "pull_request") return ArtifactKind::pull_request;
    if (s == "comment") return ArtifactKind::comment;
    if (s == "generic") return ArtifactKind::generic;
    throw std::runtime_error("unknown artifact kind: " + s);
}

namespace {
const Artifact* find_in(const std::vector<Artifact>& xs, const std::string& id) {
    for (const auto& a : xs) {
        if (a.id == id) return &a;
    }
    return nullptr;
}
}  // namespace

const Artifact* TraceDataset::find_source(const std::string& id) const {
    return find_in(sources, id);
}

const Artifact* TraceDataset::find_target(const std::string& id) const {
    return find_in(targets, id);
}

const Artifact* TraceDataset::find_artifact(const std::string& id) const {
    if (const Artifact* a = find_in(sources, id)) return a;
    return find_in(targets, id);
}

void TraceDataset::validate() const {
    std::unordered_set<std::string> ids;
    for (const auto& a : sources) {
        if (!ids.insert(a.id).second) {
            throw std::runtime_error("duplicate artifact id: " + a.id);
        }
    }
    for (const auto& a : targets) {
        if (!ids.insert(a.id).second) {
            throw std::runtime_error("duplicate artifact id: " + a.id);
        }
    }
    std::unordered_set<std::string> seen_pairs;
    for (const auto& l : links) {
        if (l.source_id == l.target_id) {
            throw std::runtime_error("link endpoints coincide: " + l.source_id);
        }
        if (!find_source(l.source_id) && !find_target(l.source_id)) {
            throw std::runtime_error("link source not in dataset: " + l.source_id);
        }
        if (!find_source(l.target_id) && !find_target(l.target_id)) {
            throw std::runtime_error("link target not in dataset: " + l.target_id);
        }
        if (!seen_pairs.insert(l.source_id + "\x1f" + l.target_id).second) {
            throw std::runtime_error("duplicate link: " + l.source_id + " -> " +
                                     l.target_id);
        }
    }
}

void sort_predictions(std::vector<Prediction>& preds) {
    std::sort(preds.begin(), preds.end(),
              [](const Prediction& a, const Prediction& b) {
                  if (a.source_id != b.source_id) return a.source_id < b.source_id;
                  if (a.score != b.score) return a.score > b.score;
                  return a.target_id < b.target_id;
              });
}

}  // namespace tracekit
