#include "hyperroad/loss.hpp"

#include "hyperroad/errors.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/roadnet.hpp"

namespace hyperroad {

namespace {

// shared shape of both reconstruction losses: anchors against positive rows
// minus anchors against negative rows
Tape::Handle reconstruction_loss(Tape& tape, Tape::Handle anchor_src, Tape::Handle other_src,
                                 const std::vector<std::pair<int, int>>& positives,
                                 const std::vector<std::vector<int>>& negatives,
                                 const std::vector<char>& skipped, bool squash) {
    std::vector<int> anchor_idx;
    std::vector<int> pos_idx;
    std::vector<int> neg_anchor_idx;
    std::vector<int> neg_idx;
    for (std::size_t p = 0; p < positives.size(); ++p) {
        if (skipped[p]) continue;
        anchor_idx.push_back(positives[p].first);
        pos_idx.push_back(positives[p].second);
        for (int n : negatives[p]) {
            neg_anchor_idx.push_back(positives[p].first);
            neg_idx.push_back(n);
        }
    }
    if (anchor_idx.empty()) return tape.leaf(Tensor::scalar(0.0));

    const Tape::Handle pos_dots = tape.rows_dot(tape.gather_rows(anchor_src, anchor_idx),
                                                tape.gather_rows(other_src, pos_idx));
    Tape::Handle neg_dots = -1;
    if (!neg_idx.empty()) {
        neg_dots = tape.rows_dot(tape.gather_rows(anchor_src, neg_anchor_idx),
                                 tape.gather_rows(other_src, neg_idx));
    }

    if (squash) {
        // SGNS form: -sum log sigmoid(pos) - sum log sigmoid(-neg)
        Tape::Handle loss = tape.scale(tape.sum_all(tape.logsigmoid(pos_dots)), -1.0);
        if (neg_dots >= 0) {
            loss = tape.add(loss,
                            tape.scale(tape.sum_all(tape.logsigmoid(tape.scale(neg_dots, -1.0))), -1.0));
        }
        return loss;
    }

    // -(sum pos - sum neg) = sum neg - sum pos
    Tape::Handle loss = tape.scale(tape.sum_all(pos_dots), -1.0);
    if (neg_dots >= 0) loss = tape.add(loss, tape.sum_all(neg_dots));
    return loss;
}

}  // namespace

Tape::Handle loss_graph_reconstruction(Tape& tape, Tape::Handle h, const GraphBatch& batch,
                                       bool squash) {
    return reconstruction_loss(tape, h, h, batch.positives, batch.negatives, batch.skipped,
                               squash);
}

Tape::Handle loss_hypergraph_reconstruction(Tape& tape, Tape::Handle h, Tape::Handle m,
                                            const HyperBatch& batch, bool squash) {
    return reconstruction_loss(tape, h, m, batch.positives, batch.negatives, batch.skipped,
                               squash);
}

Tape::Handle loss_hyperedge_classification(Tape& tape, Tape::Handle m, const Hypergraph& hg,
                                           const ParamLeaves& leaves, const ModelParams& params) {
    if (params.hec_w.cols != hg.k) {
        throw ConfigError("hyperedge classifier width " + std::to_string(params.hec_w.cols) +
                          " does not match K = " + std::to_string(hg.k));
    }
    if (hg.hyperedge_count() == 0) return tape.leaf(Tensor::scalar(0.0));
    const Tape::Handle logits = tape.add_row_bias(tape.matmul(m, leaves.of(&params.hec_w)),
                                                  leaves.of(&params.hec_b));
    return tape.softmax_cross_entropy(logits, hg.cluster_labels);
}

Tape::Handle loss_attribute_reconstruction(Tape& tape, Tape::Handle h, const RoadNetwork& net,
                                           const ParamLeaves& leaves, const ModelParams& params) {
    if (!net.schema) throw ConfigError("attribute reconstruction requires a schema");
    if (params.attr_decoders.size() != net.schema->size()) {
        throw ConfigError("attribute decoder count does not match schema");
    }
    Tape::Handle loss = tape.leaf(Tensor::scalar(0.0));
    for (std::size_t j = 0; j < net.schema->size(); ++j) {
        const auto& dec = params.attr_decoders[j];
        if (dec.w.cols != net.schema->cardinalities[j]) {
            throw ConfigError("decoder width " + std::to_string(dec.w.cols) +
                              " does not match |A_" + std::to_string(j) + "| = " +
                              std::to_string(net.schema->cardinalities[j]));
        }
        std::vector<int> labels(net.size());
        for (std::size_t i = 0; i < net.size(); ++i) {
            labels[i] = net.roads[i].attributes[j];  // kMissingAttr rows are skipped by the op
        }
        const Tape::Handle logits =
            tape.add_row_bias(tape.matmul(h, leaves.of(&dec.w)), leaves.of(&dec.b));
        loss = tape.add(loss, tape.softmax_cross_entropy(logits, std::move(labels)));
    }
    return loss;
}

TotalLoss total_loss(Tape& tape, const ForwardHandles& state, const GraphBatch& graph_batch,
                     const HyperBatch& hyper_batch, const RoadNetwork& net, const Hypergraph& hg,
                     const ParamLeaves& leaves, const ModelParams& params,
                     const TrainConfig& cfg) {
    const Tape::Handle zero = tape.leaf(Tensor::scalar(0.0));

    Tape::Handle l_gr = cfg.ablation.no_gpt
                            ? zero
                            : loss_graph_reconstruction(tape, state.h_final, graph_batch,
                                                        cfg.logsigmoid);
    Tape::Handle l_hr = cfg.ablation.no_hpt
                            ? zero
                            : loss_hypergraph_reconstruction(tape, state.h_final, state.m_final,
                                                             hyper_batch, cfg.logsigmoid);
    Tape::Handle l_hc = (cfg.ablation.no_hpt || cfg.ablation.no_hec)
                            ? zero
                            : loss_hyperedge_classification(tape, state.m_final, hg, leaves,
                                                            params);
    Tape::Handle l_ar = cfg.mode == ModelMode::attr
                            ? loss_attribute_reconstruction(tape, state.h_final, net, leaves,
                                                            params)
                            : zero;

    // total = l_gr + alpha * (l_hr + l_hc) [+ l_ar]
    Tape::Handle total = tape.add(l_gr, tape.scale(tape.add(l_hr, l_hc), cfg.alpha));
    if (cfg.mode == ModelMode::attr) total = tape.add(total, l_ar);

    TotalLoss out;
    out.handle = total;
    out.values.l_gr = tape.value(l_gr).data[0];
    out.values.l_hr = tape.value(l_hr).data[0];
    out.values.l_hc = tape.value(l_hc).data[0];
    out.values.l_ar = tape.value(l_ar).data[0];
    out.values.total = tape.value(total).data[0];
    out.values.pairs_gr = cfg.ablation.no_gpt ? 0 : graph_batch.consumed();
    out.values.pairs_hr = cfg.ablation.no_hpt ? 0 : hyper_batch.consumed();
    return out;
}

}  // namespace hyperroad
