#pragma once

#include <vector>

#include "tracekit/lda.hpp"
#include "tracekit/lsi.hpp"
#include "tracekit/splits.hpp"
#include "tracekit/vsm.hpp"

namespace tracekit {

// Scores every candidate pair of the phase by cosine of the artifacts'
// index vectors (theta vectors for LDA); output sorted per source by
// descending score with lexicographic tiebreak. Throws when a pair
// references an artifact missing from the index.
std::vector<Prediction> rank_candidates(const VsmIndex& index, const PhaseView& phase);
std::vector<Prediction> rank_candidates(const LsiIndex& index, const PhaseView& phase);
std::vector<Prediction> rank_candidates(const LdaModel& index, const PhaseView& phase);

}  // namespace tracekit
