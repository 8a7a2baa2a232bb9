#include "hyperroad/model.hpp"

#include <cmath>

#include "hyperroad/errors.hpp"
#include "hyperroad/geometry.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/rng.hpp"
#include "hyperroad/roadnet.hpp"

namespace hyperroad {

std::vector<double> positional_encoding(double p0, double p1, int d, double phi, double lambda) {
    if (d <= 0 || d % 4 != 0) {
        throw ConfigError("positional_encoding: d must be divisible by 4, got " +
                          std::to_string(d));
    }
    if (!(phi > 0.0) || !(lambda > 1.0)) {
        throw ConfigError("positional_encoding: need phi > 0 and lambda > 1");
    }
    std::vector<double> u(static_cast<std::size_t>(d));
    const double a0 = p0 / phi;
    const double a1 = p1 / phi;
    for (int k = 0; k < d / 4; ++k) {
        const double div = std::pow(lambda, static_cast<double>(4 * k) / static_cast<double>(d));
        u[static_cast<std::size_t>(4 * k)] = std::sin(a0 / div);
        u[static_cast<std::size_t>(4 * k + 1)] = std::cos(a0 / div);
        u[static_cast<std::size_t>(4 * k + 2)] = std::sin(a1 / div);
        u[static_cast<std::size_t>(4 * k + 3)] = std::cos(a1 / div);
    }
    return u;
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named_tensors() {
    std::vector<std::pair<std::string, Tensor*>> out;
    out.emplace_back("id_table", &id_table);
    out.emplace_back("input_w", &input_w);
    out.emplace_back("input_b", &input_b);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string p = "layer" + std::to_string(l) + ".";
        out.emplace_back(p + "w1", &layers[l].w1);
        out.emplace_back(p + "w2", &layers[l].w2);
        out.emplace_back(p + "w3", &layers[l].w3);
    }
    for (std::size_t c = 0; c < attention.size(); ++c) {
        const std::string p = "att" + std::to_string(c) + ".";
        out.emplace_back(p + "w", &attention[c].w);
        out.emplace_back(p + "b", &attention[c].b);
    }
    if (fusion_w.size() > 0) {
        out.emplace_back("fusion_w", &fusion_w);
        out.emplace_back("fusion_b", &fusion_b);
    }
    out.emplace_back("hec_w", &hec_w);
    out.emplace_back("hec_b", &hec_b);
    for (std::size_t j = 0; j < attr_decoders.size(); ++j) {
        const std::string p = "attr" + std::to_string(j) + ".";
        out.emplace_back(p + "w", &attr_decoders[j].w);
        out.emplace_back(p + "b", &attr_decoders[j].b);
    }
    return out;
}

std::vector<std::pair<std::string, const Tensor*>> ModelParams::named_tensors() const {
    auto mut = const_cast<ModelParams*>(this)->named_tensors();
    std::vector<std::pair<std::string, const Tensor*>> out;
    out.reserve(mut.size());
    for (auto& [name, t] : mut) out.emplace_back(name, t);
    return out;
}

int fused_channels(const TrainConfig& cfg) { return cfg.ablation.no_dam ? 2 : 3; }

namespace {

void xavier_uniform(Tensor& t, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
    for (double& v : t.data) v = rng.uniform(-limit, limit);
}

int attr_onehot_width(const RoadNetwork& net) {
    if (!net.schema) return 0;
    int w = 0;
    for (int c : net.schema->cardinalities) w += c;
    return w;
}

}  // namespace

ModelParams init_params(const RoadNetwork& net, const Hypergraph& hg, const TrainConfig& cfg) {
    cfg.validate();
    if (hg.k != cfg.k) {
        throw ConfigError("hypergraph carries K = " + std::to_string(hg.k) +
                          " clusters, config asks for K = " + std::to_string(cfg.k));
    }
    const int n = static_cast<int>(net.size());
    const int d = cfg.d;

    ModelParams p;
    int input_width = 2 * d;
    if (cfg.mode == ModelMode::attr) {
        if (!net.schema) throw ConfigError("attr mode requires an attribute schema");
        input_width += attr_onehot_width(net);
    }
    p.id_table = Tensor(n, d);
    p.input_w = Tensor(input_width, d);
    p.input_b = Tensor(1, d);
    p.layers.resize(static_cast<std::size_t>(cfg.layers));
    for (auto& lw : p.layers) {
        lw.w1 = Tensor(d, d);
        lw.w2 = Tensor(d, d);
        lw.w3 = Tensor(d, d);
    }
    const int channels = fused_channels(cfg);
    if (cfg.fusion == FusionVariant::attention) {
        p.attention.resize(static_cast<std::size_t>(channels));
        for (auto& cs : p.attention) {
            cs.w = Tensor(d, 1);
            cs.b = Tensor(1, 1);
        }
    } else if (cfg.fusion == FusionVariant::mlp) {
        p.fusion_w = Tensor(channels * d, d);
        p.fusion_b = Tensor(1, d);
    }
    p.hec_w = Tensor(d, cfg.k);
    p.hec_b = Tensor(1, cfg.k);
    if (cfg.mode == ModelMode::attr) {
        p.attr_decoders.resize(net.schema->size());
        for (std::size_t j = 0; j < p.attr_decoders.size(); ++j) {
            p.attr_decoders[j].w = Tensor(d, net.schema->cardinalities[j]);
            p.attr_decoders[j].b = Tensor(1, net.schema->cardinalities[j]);
        }
    }

    // initialization draws follow named_tensors order
    Rng rng(cfg.seed);
    for (auto& [name, t] : p.named_tensors()) {
        if (name == "id_table") {
            for (double& v : t->data) v = 0.1 * rng.normal();
        } else if (name.ends_with("_b") || name.ends_with(".b")) {
            std::fill(t->data.begin(), t->data.end(), 0.0);
        } else {
            xavier_uniform(*t, rng);
        }
    }
    return p;
}

ModelGraph ModelGraph::build(const RoadNetwork& net, const Hypergraph& hg,
                             const TrainConfig& cfg) {
    if (hg.road_count() != net.size()) {
        throw ConfigError("hypergraph was built for " + std::to_string(hg.road_count()) +
                          " roads, network has " + std::to_string(net.size()));
    }
    ModelGraph g;
    g.n_roads = static_cast<int>(net.size());
    g.n_hyperedges = static_cast<int>(hg.hyperedge_count());

    if (cfg.directed_neighbors) {
        g.neighbor_sets = std::make_shared<const std::vector<std::vector<int>>>(net.neighbors());
    } else {
        g.neighbor_sets = std::make_shared<const std::vector<std::vector<int>>>(
            symmetrize_neighbors(net).neighbors());
    }
    g.roads_of_edge =
        std::make_shared<const std::vector<std::vector<int>>>(hg.hyperedge_to_roads);
    g.edges_of_road =
        std::make_shared<const std::vector<std::vector<int>>>(hg.road_to_hyperedges);

    const Projection proj = Projection::about_centroid(net);
    g.positional = Tensor(g.n_roads, cfg.d);
    for (int i = 0; i < g.n_roads; ++i) {
        const auto& r = net.roads[static_cast<std::size_t>(i)];
        const ProjectedPoint pp = proj(r.lon, r.lat);
        // p0 = projected latitude (north), p1 = projected longitude (east)
        const auto u = positional_encoding(pp.y, pp.x, cfg.d, cfg.phi, cfg.lambda);
        for (int c = 0; c < cfg.d; ++c) g.positional.at(i, c) = u[static_cast<std::size_t>(c)];
    }

    if (cfg.mode == ModelMode::attr) {
        if (!net.schema) throw ConfigError("attr mode requires an attribute schema");
        const int width = attr_onehot_width(net);
        g.attr_onehot = Tensor(g.n_roads, width);
        for (int i = 0; i < g.n_roads; ++i) {
            int offset = 0;
            for (std::size_t j = 0; j < net.schema->size(); ++j) {
                const int v = net.roads[static_cast<std::size_t>(i)].attributes[j];
                if (v != kMissingAttr) g.attr_onehot.at(i, offset + v) = 1.0;
                offset += net.schema->cardinalities[j];
            }
        }
    }
    return g;
}

Tape::Handle ParamLeaves::of(const Tensor* t) const {
    for (const auto& [ptr, h] : leaves) {
        if (ptr == t) return h;
    }
    throw ConfigError("parameter tensor not registered on the tape");
}

ParamLeaves insert_params(Tape& tape, const ModelParams& params) {
    ParamLeaves out;
    for (const auto& [name, t] : params.named_tensors()) {
        out.leaves.emplace_back(t, tape.leaf(*t));
    }
    return out;
}

Tape::Handle input_embedding(Tape& tape, const ParamLeaves& leaves, const ModelParams& params,
                             const ModelGraph& graph, const TrainConfig& cfg) {
    const Tape::Handle q = leaves.of(&params.id_table);
    Tape::Handle u;
    if (cfg.ablation.no_pe) {
        u = tape.leaf(Tensor(graph.n_roads, cfg.d));  // zero positional block
    } else {
        u = tape.leaf(graph.positional);
    }
    std::vector<Tape::Handle> parts{q, u};
    if (cfg.mode == ModelMode::attr) {
        parts.push_back(tape.leaf(graph.attr_onehot));
    }
    const Tape::Handle joined = tape.concat_cols(parts);
    return tape.add_row_bias(tape.matmul(joined, leaves.of(&params.input_w)),
                             leaves.of(&params.input_b));
}

Tape::Handle edge_channel(Tape& tape, Tape::Handle h_prev,
                          std::shared_ptr<const std::vector<std::vector<int>>> neighbor_sets,
                          Tape::Handle w1) {
    const Tape::Handle transformed = tape.matmul(h_prev, w1);
    return tape.relu(tape.segment_mean(transformed, std::move(neighbor_sets)));
}

std::pair<Tape::Handle, Tape::Handle> hyperedge_channel(
    Tape& tape, Tape::Handle h_prev,
    std::shared_ptr<const std::vector<std::vector<int>>> roads_of_edge,
    std::shared_ptr<const std::vector<std::vector<int>>> edges_of_road, Tape::Handle w2,
    Tape::Handle w3) {
    const Tape::Handle m_new =
        tape.relu(tape.segment_mean(tape.matmul(h_prev, w2), std::move(roads_of_edge)));
    const Tape::Handle h_hyper =
        tape.relu(tape.segment_mean(tape.matmul(m_new, w3), std::move(edges_of_road)));
    return {m_new, h_hyper};
}

Tape::Handle fuse(Tape& tape, const std::vector<Tape::Handle>& messages, FusionVariant variant,
                  const ParamLeaves& leaves, const ModelParams& params) {
    const int c_count = static_cast<int>(messages.size());
    if (c_count < 2) throw ConfigError("fuse: need at least two channels");
    switch (variant) {
        case FusionVariant::mean: {
            Tape::Handle acc = messages[0];
            for (int c = 1; c < c_count; ++c) acc = tape.add(acc, messages[static_cast<std::size_t>(c)]);
            return tape.scale(acc, 1.0 / static_cast<double>(c_count));
        }
        case FusionVariant::attention: {
            if (static_cast<int>(params.attention.size()) != c_count) {
                throw ConfigError("fuse: attention params sized for " +
                                  std::to_string(params.attention.size()) + " channels, got " +
                                  std::to_string(c_count));
            }
            std::vector<Tape::Handle> scores;
            scores.reserve(static_cast<std::size_t>(c_count));
            for (int c = 0; c < c_count; ++c) {
                const auto& cs = params.attention[static_cast<std::size_t>(c)];
                scores.push_back(tape.add_row_bias(
                    tape.matmul(messages[static_cast<std::size_t>(c)], leaves.of(&cs.w)),
                    leaves.of(&cs.b)));
            }
            const Tape::Handle weights = tape.row_softmax(tape.concat_cols(scores));
            Tape::Handle acc = -1;
            for (int c = 0; c < c_count; ++c) {
                const Tape::Handle term = tape.colvec_mul(tape.select_col(weights, c),
                                                          messages[static_cast<std::size_t>(c)]);
                acc = c == 0 ? term : tape.add(acc, term);
            }
            return acc;
        }
        case FusionVariant::mlp: {
            if (params.fusion_w.rows != c_count * params.fusion_w.cols) {
                throw ConfigError("fuse: MLP fusion weight sized for different channel count");
            }
            return tape.add_row_bias(tape.matmul(tape.concat_cols(messages), leaves.of(&params.fusion_w)),
                                     leaves.of(&params.fusion_b));
        }
    }
    throw ConfigError("fuse: unknown variant");
}

ForwardHandles forward(Tape& tape, const ParamLeaves& leaves, const ModelParams& params,
                       const ModelGraph& graph, const TrainConfig& cfg) {
    ForwardHandles out;
    Tape::Handle h = input_embedding(tape, leaves, params, graph, cfg);
    out.h_layers.push_back(h);
    for (int l = 0; l < cfg.layers; ++l) {
        const auto& lw = params.layers[static_cast<std::size_t>(l)];
        auto [m_new, h_hyper] = hyperedge_channel(tape, h, graph.roads_of_edge,
                                                  graph.edges_of_road, leaves.of(&lw.w2),
                                                  leaves.of(&lw.w3));
        std::vector<Tape::Handle> messages{h};  // self channel is the residual copy
        if (!cfg.ablation.no_dam) {
            messages.push_back(edge_channel(tape, h, graph.neighbor_sets, leaves.of(&lw.w1)));
        }
        messages.push_back(h_hyper);
        h = fuse(tape, messages, cfg.fusion, leaves, params);
        out.h_layers.push_back(h);
        out.m_layers.push_back(m_new);
    }
    out.h_final = h;
    out.m_final = out.m_layers.back();
    return out;
}

}  // namespace hyperroad
