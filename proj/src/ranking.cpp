#include "tracekit/ranking.hpp"

namespace tracekit {

namespace {

template <typename Index>
std::vector<Prediction> rank_with(const Index& index, const PhaseView& phase) {
    std::vector<Prediction> preds;
    preds.reserve(phase.pairs.size());
    for (const auto& pair : phase.pairs) {
        Prediction p;
        p.source_id = pair.source_id;
        p.target_id = pair.target_id;
        p.score = cosine(index.vector_for(pair.source_id),
                         index.vector_for(pair.target_id));
        preds.push_back(std::move(p));
    }
    sort_predictions(preds);
    return preds;
}

}  // namespace

std::vector<Prediction> rank_candidates(const VsmIndex& index, const PhaseView& phase) {
    return rank_with(index, phase);
}

std::vector<Prediction> rank_candidates(const LsiIndex& index, const PhaseView& phase) {
    return rank_with(index, phase);
}

std::vector<Prediction> rank_candidates(const LdaModel& index, const PhaseView& phase) {
    return rank_with(index, phase);
}

}  // namespace tracekit
