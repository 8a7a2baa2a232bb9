#include "hyperroad/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

#include "hyperroad/adam.hpp"
#include "hyperroad/errors.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/roadnet.hpp"
#include "hyperroad/rng.hpp"
#include "hyperroad/sampler.hpp"

namespace hyperroad {

namespace {

// positive incidence pairs (road, hyperedge)
std::vector<std::pair<int, int>> incidence_pairs(const Hypergraph& hg) {
    std::vector<std::pair<int, int>> out;
    out.reserve(hg.incidence_count());
    for (std::size_t i = 0; i < hg.road_to_hyperedges.size(); ++i) {
        for (int e : hg.road_to_hyperedges[i]) out.emplace_back(static_cast<int>(i), e);
    }
    return out;
}

std::vector<std::pair<int, int>> neighbor_pairs(const std::vector<std::vector<int>>& sets) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (int j : sets[i]) out.emplace_back(static_cast<int>(i), j);
    }
    return out;
}

// cycles through a shuffled pool in fixed-size slices
class BatchCursor {
public:
    BatchCursor(std::vector<std::pair<int, int>> pool, Rng rng)
        : pool_(std::move(pool)), rng_(rng) {
        if (!pool_.empty()) rng_.shuffle(pool_);
    }

    // at most one full pass per call; wraps and reshuffles when exhausted
    std::vector<std::pair<int, int>> take(std::size_t count) {
        std::vector<std::pair<int, int>> out;
        if (pool_.empty()) return out;
        count = std::min(count, pool_.size());
        out.reserve(count);
        for (std::size_t t = 0; t < count; ++t) {
            if (cursor_ == pool_.size()) {
                rng_.shuffle(pool_);
                cursor_ = 0;
            }
            out.push_back(pool_[cursor_++]);
        }
        return out;
    }

    std::size_t pool_size() const { return pool_.size(); }

private:
    std::vector<std::pair<int, int>> pool_;
    Rng rng_;
    std::size_t cursor_ = 0;
};

}  // namespace

PretrainResult pretrain(const RoadNetwork& net, const Hypergraph& hg, const TrainConfig& cfg) {
    cfg.validate();
    const ModelGraph graph = ModelGraph::build(net, hg, cfg);

    PretrainResult result;
    result.params = init_params(net, hg, cfg);

    auto named = result.params.named_tensors();
    std::vector<Tensor*> param_ptrs;
    param_ptrs.reserve(named.size());
    for (auto& [name, t] : named) param_ptrs.push_back(t);
    AdamState adam = AdamState::like(param_ptrs);

    // independent deterministic streams for shuffling and negative sampling
    Rng stream(cfg.seed ^ 0x7261696e5f726e67ULL);
    BatchCursor edge_cursor(neighbor_pairs(*graph.neighbor_sets), stream.split());
    BatchCursor incidence_cursor(incidence_pairs(hg), stream.split());

    NegativeSampler sampler(graph.neighbor_sets, graph.edges_of_road,
                            static_cast<int>(hg.hyperedge_count()), cfg.sampler, cfg.n_g, cfg.n_h,
                            stream.next_u64());
    std::shared_ptr<const DistanceTables> dist;
    if (cfg.sampler == SamplerVariant::dbs) {
        dist = std::make_shared<const DistanceTables>(
            build_dbs_tables(*graph.neighbor_sets, cfg.dbs_node_cap));
        sampler.attach_distances(dist, hg);
    }

    const std::size_t edges_total = edge_cursor.pool_size();
    const std::size_t batch = static_cast<std::size_t>(cfg.batch_size);
    const std::size_t steps_per_epoch =
        edges_total == 0 ? 1 : (edges_total + batch - 1) / batch;
    const long long total_steps =
        cfg.steps > 0 ? cfg.steps : static_cast<long long>(cfg.epochs) * steps_per_epoch;

    double best_total = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (long long step = 0; step < total_steps; ++step) {
        Tape tape;
        const ParamLeaves leaves = insert_params(tape, result.params);
        const ForwardHandles state = forward(tape, leaves, result.params, graph, cfg);

        const GraphBatch gb = sampler.draw_graph_batch(edge_cursor.take(batch));
        const HyperBatch hb = sampler.draw_hyper_batch(incidence_cursor.take(batch));
        const TotalLoss loss = total_loss(tape, state, gb, hb, net, hg, leaves, result.params, cfg);

        if (!std::isfinite(loss.values.total)) {
            throw NumericError("pretraining diverged: non-finite loss at step " +
                               std::to_string(step + 1));
        }
        tape.backward(loss.handle);

        std::vector<const Tensor*> grads;
        grads.reserve(leaves.leaves.size());
        for (const auto& [ptr, handle] : leaves.leaves) grads.push_back(&tape.grad(handle));
        adam_step(param_ptrs, grads, adam, cfg.lr);

        result.history.push_back({static_cast<int>(step + 1), loss.values});

        if (cfg.early_stop) {
            if (loss.values.total < best_total - 1e-12) {
                best_total = loss.values.total;
                since_best = 0;
            } else if (++since_best >= cfg.patience) {
                break;
            }
        }
    }
    return result;
}

Tensor compute_embeddings(const ModelParams& params, const RoadNetwork& net, const Hypergraph& hg,
                          const TrainConfig& cfg) {
    const ModelGraph graph = ModelGraph::build(net, hg, cfg);
    Tape tape;
    tape.set_check_finite(false);
    const ParamLeaves leaves = insert_params(tape, params);
    const ForwardHandles state = forward(tape, leaves, params, graph, cfg);
    return tape.value(state.h_final);
}

void write_loss_csv(const std::vector<LossHistoryRow>& history, std::ostream& out) {
    out << "step,l_gr,l_hr,l_hc,l_ar,total\n";
    char buf[160];
    for (const auto& row : history) {
        const int len = std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                      row.step, row.loss.l_gr, row.loss.l_hr, row.loss.l_hc,
                                      row.loss.l_ar, row.loss.total);
        out.write(buf, len);
    }
}

}  // namespace hyperroad
