#pragma once

#include <vector>

#include "hyperroad/config.hpp"
#include "hyperroad/model.hpp"
#include "hyperroad/sampler.hpp"
#include "hyperroad/tape.hpp"

namespace hyperroad {

class RoadNetwork;
struct Hypergraph;

struct LossBreakdown {
    double l_gr = 0.0;
    double l_hr = 0.0;
    double l_hc = 0.0;
    double l_ar = 0.0;
    double total = 0.0;
    std::size_t pairs_gr = 0;  // positive pairs consumed (skips excluded)
    std::size_t pairs_hr = 0;
};

// -sum over pairs of (h_i . h_j - sum_n h_i . h_n); skipped pairs contribute
// nothing. With squash = true the SGNS log-sigmoid form is used instead
// (documented departure from the raw dot-product objective).
Tape::Handle loss_graph_reconstruction(Tape& tape, Tape::Handle h, const GraphBatch& batch,
                                       bool squash = false);

Tape::Handle loss_hypergraph_reconstruction(Tape& tape, Tape::Handle h, Tape::Handle m,
                                            const HyperBatch& batch, bool squash = false);

// sum of softmax cross-entropy of MLP(m_j) against the cluster labels
Tape::Handle loss_hyperedge_classification(Tape& tape, Tape::Handle m, const Hypergraph& hg,
                                           const ParamLeaves& leaves, const ModelParams& params);

// sum over roads and attributes with a present value of CE(MLP_j(h_i), a_ij)
Tape::Handle loss_attribute_reconstruction(Tape& tape, Tape::Handle h, const RoadNetwork& net,
                                           const ParamLeaves& leaves, const ModelParams& params);

struct TotalLoss {
    Tape::Handle handle = -1;
    LossBreakdown values;
};

// total = l_gr + alpha * (l_hr + l_hc) [+ l_ar], with ablation switches:
// no_gpt drops l_gr, no_hpt drops both hypergraph terms, no_hec drops l_hc.
TotalLoss total_loss(Tape& tape, const ForwardHandles& state, const GraphBatch& graph_batch,
                     const HyperBatch& hyper_batch, const RoadNetwork& net, const Hypergraph& hg,
                     const ParamLeaves& leaves, const ModelParams& params, const TrainConfig& cfg);

}  // namespace hyperroad
