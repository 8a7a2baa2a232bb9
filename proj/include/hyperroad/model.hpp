#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hyperroad/config.hpp"
#include "hyperroad/tape.hpp"
#include "hyperroad/tensor.hpp"

namespace hyperroad {

class RoadNetwork;
struct Hypergraph;

// Deterministic 2-D sinusoidal encoding of a projected coordinate pair.
// u(4k)   = sin((p0/phi) / lambda^(4k/d))
// u(4k+1) = cos((p0/phi) / lambda^(4k/d))
// u(4k+2) = sin((p1/phi) / lambda^(4k/d))
// u(4k+3) = cos((p1/phi) / lambda^(4k/d))
std::vector<double> positional_encoding(double p0, double p1, int d, double phi, double lambda);

struct ModelParams {
    Tensor id_table;  // N x d
    Tensor input_w;   // (2d [+ sum |A_j|]) x d
    Tensor input_b;   // 1 x d

    struct LayerWeights {
        Tensor w1;  // edge channel
        Tensor w2;  // node -> hyperedge
        Tensor w3;  // hyperedge -> node
    };
    std::vector<LayerWeights> layers;

    struct ChannelScore {
        Tensor w;  // d x 1
        Tensor b;  // 1 x 1
    };
    std::vector<ChannelScore> attention;  // one per fused channel

    Tensor fusion_w;  // (channels * d) x d, MLP fusion only
    Tensor fusion_b;  // 1 x d

    Tensor hec_w;  // d x K
    Tensor hec_b;  // 1 x K

    struct AttrDecoder {
        Tensor w;  // d x |A_j|
        Tensor b;  // 1 x |A_j|
    };
    std::vector<AttrDecoder> attr_decoders;

    // canonical enumeration order: initialization, Adam state, checkpoints
    std::vector<std::pair<std::string, Tensor*>> named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> named_tensors() const;
};

// number of channels entering fusion (self + hyperedge, + edge unless no_dam)
int fused_channels(const TrainConfig& cfg);

// Xavier-uniform weights, zero biases, N(0, 0.1^2) id rows, all from cfg.seed.
ModelParams init_params(const RoadNetwork& net, const Hypergraph& hg, const TrainConfig& cfg);

// Immutable per-dataset structures shared across forward passes.
struct ModelGraph {
    std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets;  // N_i
    std::shared_ptr<const std::vector<std::vector<int>>> roads_of_edge;  // R_j
    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road;  // H_i
    Tensor positional;   // N x d, constant
    Tensor attr_onehot;  // N x sum |A_j| (empty unless attr mode)
    int n_roads = 0;
    int n_hyperedges = 0;

    static ModelGraph build(const RoadNetwork& net, const Hypergraph& hg, const TrainConfig& cfg);
};

// parameter tensors registered as tape leaves for one forward/backward pass
struct ParamLeaves {
    std::vector<std::pair<const Tensor*, Tape::Handle>> leaves;
    Tape::Handle of(const Tensor* t) const;
};

ParamLeaves insert_params(Tape& tape, const ModelParams& params);

struct ForwardHandles {
    Tape::Handle h_final = -1;  // N x d
    Tape::Handle m_final = -1;  // M x d
    std::vector<Tape::Handle> h_layers;  // h^(0) .. h^(L)
    std::vector<Tape::Handle> m_layers;  // m^(1) .. m^(L)
};

// r_i = MLP(q_i || u_i [|| f_i]); the positional block is zeroed under no_pe
Tape::Handle input_embedding(Tape& tape, const ParamLeaves& leaves, const ModelParams& params,
                             const ModelGraph& graph, const TrainConfig& cfg);

Tape::Handle edge_channel(Tape& tape, Tape::Handle h_prev,
                          std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets,
                          Tape::Handle w1);

std::pair<Tape::Handle, Tape::Handle> hyperedge_channel(
    Tape& tape, Tape::Handle h_prev,
    std::shared_ptr<const std::vector<std::vector<int>>> roads_of_edge,
    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road, Tape::Handle w2,
    Tape::Handle w3);

// messages[0] is the self channel; params supply attention/MLP weights
Tape::Handle fuse(Tape& tape, const std::vector<Tape::Handle>& messages, FusionVariant variant,
                  const ParamLeaves& leaves, const ModelParams& params);

ForwardHandles forward(Tape& tape, const ParamLeaves& leaves, const ModelParams& params,
                       const ModelGraph& graph, const TrainConfig& cfg);

}  // namespace hyperroad
