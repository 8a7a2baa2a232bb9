#pragma once

#include <iosfwd>
#include <vector>

#include "hyperroad/config.hpp"
#include "hyperroad/loss.hpp"
#include "hyperroad/model.hpp"

namespace hyperroad {

struct LossHistoryRow {
    int step = 0;
    LossBreakdown loss;
};

struct PretrainResult {
    ModelParams params;
    std::vector<LossHistoryRow> history;
};

// Minibatched pretraining: positive road pairs and positive incidence pairs
// are shuffled per epoch, negatives are redrawn every step, the hyperedge
// classification and attribute losses run over the full sets each step.
// Deterministic given cfg.seed. Throws NumericError on a non-finite loss.
PretrainResult pretrain(const RoadNetwork& net, const Hypergraph& hg, const TrainConfig& cfg);

// final-layer road embeddings for a trained checkpoint (no tape kept)
Tensor compute_embeddings(const ModelParams& params, const RoadNetwork& net, const Hypergraph& hg,
                          const TrainConfig& cfg);

void write_loss_csv(const std::vector<LossHistoryRow>& history, std::ostream& out);

}  // namespace hyperroad
