#include <cmath>
#include <memory>

#include "doctest.h"
#include "hyperroad/errors.hpp"
#include "hyperroad/faces.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/model.hpp"
#include "hyperroad/rng.hpp"
#include "test_util.hpp"

using namespace hyperroad;
using testutil::grid_graph;

namespace {

TrainConfig small_config(int d = 8, int layers = 2, int k = 2) {
    TrainConfig cfg;
    cfg.d = d;
    cfg.layers = layers;
    cfg.k = k;
    cfg.seed = 11;
    return cfg;
}

struct Fixture {
    RoadNetwork net;
    Hypergraph hg;
    TrainConfig cfg;
    ModelParams params;
    ModelGraph graph;
};

Fixture make_fixture(const TrainConfig& cfg) {
    Fixture f{grid_graph(3, 3), {}, cfg, {}, {}};
    f.hg = build_hypergraph(f.net, extract_faces(f.net), cfg.k, cfg.seed);
    f.params = init_params(f.net, f.hg, cfg);
    f.graph = ModelGraph::build(f.net, f.hg, cfg);
    return f;
}

}  // namespace

TEST_CASE("positional_encoding examples") {
    SUBCASE("origin maps to alternating 0, 1") {
        const auto u = positional_encoding(0.0, 0.0, 8, 10.0, 1000.0);
        for (int k = 0; k < 8; k += 2) {
            CHECK(u[static_cast<std::size_t>(k)] == 0.0);
            CHECK(u[static_cast<std::size_t>(k + 1)] == 1.0);
        }
    }
    SUBCASE("direct evaluation at p = (10, 0), phi 10, lambda 1000, d 4") {
        const auto u = positional_encoding(10.0, 0.0, 4, 10.0, 1000.0);
        CHECK(u[0] == doctest::Approx(std::sin(1.0)));
        CHECK(u[1] == doctest::Approx(std::cos(1.0)));
        CHECK(u[2] == doctest::Approx(0.0));
        CHECK(u[3] == doctest::Approx(1.0));
    }
    SUBCASE("entries bounded by one for random inputs") {
        Rng rng(4);
        for (int trial = 0; trial < 50; ++trial) {
            const auto u = positional_encoding(rng.uniform(-1e7, 1e7), rng.uniform(-1e7, 1e7), 16,
                                               10.0, 1000.0);
            for (double v : u) {
                CHECK(v <= 1.0);
                CHECK(v >= -1.0);
            }
        }
    }
    SUBCASE("d not divisible by 4") {
        CHECK_THROWS_AS(positional_encoding(0, 0, 6, 10, 1000), ConfigError);
    }
}

TEST_CASE("input_embedding: affine collapse with zero weights") {
    auto f = make_fixture(small_config());
    // zero id table and input weights, nonzero bias: every row equals the bias
    std::fill(f.params.id_table.data.begin(), f.params.id_table.data.end(), 0.0);
    std::fill(f.params.input_w.data.begin(), f.params.input_w.data.end(), 0.0);
    for (int c = 0; c < f.cfg.d; ++c) f.params.input_b.at(0, c) = 0.5 + c;

    Tape tape;
    auto leaves = insert_params(tape, f.params);
    auto r = input_embedding(tape, leaves, f.params, f.graph, f.cfg);
    const Tensor& rv = tape.value(r);
    for (int i = 0; i < rv.rows; ++i) {
        for (int c = 0; c < rv.cols; ++c) CHECK(rv.at(i, c) == doctest::Approx(0.5 + c));
    }
}

TEST_CASE("input_embedding: identical ids and positions give identical rows") {
    auto cfg = small_config();
    auto net = testutil::make_net({{1, 2}, {1, 2}, {3, 4}}, {{0, 2}, {1, 2}});
    // hypergraph with no hyperedges is fine for the embedding path
    Hypergraph hg;
    hg.k = cfg.k;
    hg.road_to_hyperedges.resize(net.size());
    auto params = init_params(net, hg, cfg);
    // force identical id rows for roads 0 and 1
    for (int c = 0; c < cfg.d; ++c) params.id_table.at(1, c) = params.id_table.at(0, c);
    auto graph = ModelGraph::build(net, hg, cfg);
    Tape tape;
    auto leaves = insert_params(tape, params);
    auto r = input_embedding(tape, leaves, params, graph, cfg);
    for (int c = 0; c < cfg.d; ++c) {
        CHECK(tape.value(r).at(0, c) == tape.value(r).at(1, c));
    }
}

TEST_CASE("input_embedding: attr mode appends one-hot blocks") {
    auto cfg = small_config();
    cfg.mode = ModelMode::attr;
    AttributeSchema schema;
    schema.names = {"a", "b"};
    schema.cardinalities = {3, 2};
    auto net = grid_graph(3, 3);
    net.schema = schema;
    for (std::size_t i = 0; i < net.size(); ++i) {
        net.roads[i].attributes = {static_cast<int>(i) % 3, static_cast<int>(i) % 2};
    }
    net.roads[0].attributes = {kMissingAttr, 1};  // missing => zero block
    Hypergraph hg = build_hypergraph(net, extract_faces(net), cfg.k, cfg.seed);
    auto graph = ModelGraph::build(net, hg, cfg);
    REQUIRE(graph.attr_onehot.cols == 5);
    // road 0: first block all zero, second block one-hot at value 1
    CHECK(graph.attr_onehot.at(0, 0) == 0.0);
    CHECK(graph.attr_onehot.at(0, 1) == 0.0);
    CHECK(graph.attr_onehot.at(0, 2) == 0.0);
    CHECK(graph.attr_onehot.at(0, 3) == 0.0);
    CHECK(graph.attr_onehot.at(0, 4) == 1.0);
    // every present attribute contributes exactly one 1
    for (int i = 1; i < graph.n_roads; ++i) {
        double sum = 0.0;
        for (int c = 0; c < 5; ++c) sum += graph.attr_onehot.at(i, c);
        CHECK(sum == 2.0);
    }
    // params sized to take the wider input
    auto params = init_params(net, hg, cfg);
    CHECK(params.input_w.rows == 2 * cfg.d + 5);
}

TEST_CASE("edge_channel matches a per-node loop oracle") {
    auto f = make_fixture(small_config());
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    auto h0 = input_embedding(tape, leaves, f.params, f.graph, f.cfg);
    auto he = edge_channel(tape, h0, f.graph.neighbor_sets, leaves.of(&f.params.layers[0].w1));

    const Tensor& h = tape.value(h0);
    const Tensor& w1 = f.params.layers[0].w1;
    const Tensor& out = tape.value(he);
    // oracle: mean over neighbors of W1 h_j, then ReLU, one node at a time
    for (int i = 0; i < f.graph.n_roads; ++i) {
        const auto& nbrs = (*f.graph.neighbor_sets)[static_cast<std::size_t>(i)];
        for (int c = 0; c < f.cfg.d; ++c) {
            double acc = 0.0;
            for (int j : nbrs) {
                double cell = 0.0;
                for (int t = 0; t < f.cfg.d; ++t) cell += h.at(j, t) * w1.at(t, c);
                acc += cell;
            }
            if (!nbrs.empty()) acc /= static_cast<double>(nbrs.size());
            acc = acc > 0.0 ? acc : 0.0;
            CHECK(out.at(i, c) == doctest::Approx(acc).epsilon(1e-12));
        }
    }
}

TEST_CASE("edge_channel special cases") {
    auto cfg = small_config(4, 1, 1);
    SUBCASE("single neighbor with identity weight reproduces relu of the neighbor") {
        auto net = testutil::make_net({{0, 0}, {1, 0}}, {{0, 1}});
        Tape tape;
        Tensor h0(2, 4);
        for (int c = 0; c < 4; ++c) {
            h0.at(0, c) = -1.0 + c;
            h0.at(1, c) = 0.5 * c - 1.0;
        }
        Tensor eye(4, 4);
        for (int c = 0; c < 4; ++c) eye.at(c, c) = 1.0;
        auto hl = tape.leaf(h0);
        auto wl = tape.leaf(eye);
        auto sets = std::make_shared<const std::vector<std::vector<int>>>(net.neighbors());
        auto he = edge_channel(tape, hl, sets, wl);
        for (int c = 0; c < 4; ++c) {
            CHECK(tape.value(he).at(0, c) == doctest::Approx(std::max(0.0, h0.at(1, c))));
        }
        (void)cfg;
    }
    SUBCASE("two opposite neighbors cancel to zero") {
        auto net = testutil::make_net({{0, 0}, {1, 0}, {-1, 0}}, {{0, 1}, {0, 2}});
        Tape tape;
        Tensor h0(3, 4);
        for (int c = 0; c < 4; ++c) {
            h0.at(1, c) = 1.0 + c;
            h0.at(2, c) = -(1.0 + c);
        }
        Tensor eye(4, 4);
        for (int c = 0; c < 4; ++c) eye.at(c, c) = 1.0;
        auto hl = tape.leaf(h0);
        auto wl = tape.leaf(eye);
        auto sets = std::make_shared<const std::vector<std::vector<int>>>(net.neighbors());
        auto he = edge_channel(tape, hl, sets, wl);
        for (int c = 0; c < 4; ++c) CHECK(tape.value(he).at(0, c) == 0.0);
    }
}

TEST_CASE("hyperedge_channel: global-mean case and empty membership") {
    // one hyperedge containing all nodes, identity weights
    auto net = testutil::make_net({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {});
    Hypergraph hg;
    hg.k = 1;
    hg.hyperedge_to_roads = {{0, 1, 2}};
    hg.road_to_hyperedges = {{0}, {0}, {0}, {}};  // road 3 in no hyperedge
    hg.cluster_labels = {0};
    FaceFeatures ff;
    ff.size = 3;
    ff.area = 1.0;
    ff.sides = 3;
    hg.features = {ff};

    Tape tape;
    Tensor h0 = Tensor::from_rows({{1, -2}, {3, 4}, {5, 0}, {7, 7}});
    Tensor eye = Tensor::from_rows({{1, 0}, {0, 1}});
    auto hl = tape.leaf(h0);
    auto w2 = tape.leaf(eye);
    auto w3 = tape.leaf(eye);
    auto roads_of_edge = std::make_shared<const std::vector<std::vector<int>>>(hg.hyperedge_to_roads);
    auto edges_of_road = std::make_shared<const std::vector<std::vector<int>>>(hg.road_to_hyperedges);
    auto [m, hh] = hyperedge_channel(tape, hl, roads_of_edge, edges_of_road, w2, w3);

    // m = relu(mean of rows 0..2) = relu((3, 2/3... )) computed by hand
    CHECK(tape.value(m).at(0, 0) == doctest::Approx(3.0));
    CHECK(tape.value(m).at(0, 1) == doctest::Approx(2.0 / 3.0));
    for (int i = 0; i < 3; ++i) {
        CHECK(tape.value(hh).at(i, 0) == doctest::Approx(3.0));
        CHECK(tape.value(hh).at(i, 1) == doctest::Approx(2.0 / 3.0));
    }
    // node in no hyperedge gets the zero message
    CHECK(tape.value(hh).at(3, 0) == 0.0);
    CHECK(tape.value(hh).at(3, 1) == 0.0);
}

TEST_CASE("hyperedge_channel: disjoint hyperedges act block-diagonally") {
    Tape tape;
    Tensor h0 = Tensor::from_rows({{2, 0}, {4, 0}, {0, 6}, {0, 8}});
    Tensor eye = Tensor::from_rows({{1, 0}, {0, 1}});
    auto hl = tape.leaf(h0);
    auto w2 = tape.leaf(eye);
    auto w3 = tape.leaf(eye);
    auto roads_of_edge =
        std::make_shared<const std::vector<std::vector<int>>>(std::vector<std::vector<int>>{{0, 1}, {2, 3}});
    auto edges_of_road = std::make_shared<const std::vector<std::vector<int>>>(
        std::vector<std::vector<int>>{{0}, {0}, {1}, {1}});
    auto [m, hh] = hyperedge_channel(tape, hl, roads_of_edge, edges_of_road, w2, w3);
    // per-set loop oracle: set {0,1} mean (3,0); set {2,3} mean (0,7)
    CHECK(tape.value(m).at(0, 0) == doctest::Approx(3.0));
    CHECK(tape.value(m).at(0, 1) == 0.0);
    CHECK(tape.value(m).at(1, 0) == 0.0);
    CHECK(tape.value(m).at(1, 1) == doctest::Approx(7.0));
    CHECK(tape.value(hh).at(0, 0) == doctest::Approx(3.0));
    CHECK(tape.value(hh).at(3, 1) == doctest::Approx(7.0));
    CHECK(tape.value(hh).at(0, 1) == 0.0);
}

TEST_CASE("fuse: mean identities") {
    auto f = make_fixture(small_config());
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    Rng rng(5);
    Tensor x(4, f.cfg.d);
    for (double& v : x.data) v = rng.uniform(-1, 1);
    auto hx = tape.leaf(x);
    SUBCASE("mean of (x, x, x) is x") {
        auto out = fuse(tape, {hx, hx, hx}, FusionVariant::mean, leaves, f.params);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(tape.value(out).data[i] == doctest::Approx(x.data[i]).epsilon(1e-14));
        }
    }
    SUBCASE("mean of (x, 0, 0) is x/3") {
        auto hz = tape.leaf(Tensor(4, f.cfg.d));
        auto out = fuse(tape, {hx, hz, hz}, FusionVariant::mean, leaves, f.params);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(tape.value(out).data[i] == doctest::Approx(x.data[i] / 3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("fuse: attention with tied scores equals mean") {
    auto cfg = small_config();
    cfg.fusion = FusionVariant::attention;
    auto f = make_fixture(cfg);
    // tie the channel scoring parameters
    for (auto& cs : f.params.attention) {
        std::fill(cs.w.data.begin(), cs.w.data.end(), 0.0);
        cs.b.data[0] = 0.7;
    }
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    Rng rng(6);
    Tensor a(5, cfg.d), b(5, cfg.d), c(5, cfg.d);
    for (double& v : a.data) v = rng.uniform(-1, 1);
    for (double& v : b.data) v = rng.uniform(-1, 1);
    for (double& v : c.data) v = rng.uniform(-1, 1);
    auto ha = tape.leaf(a), hb = tape.leaf(b), hc = tape.leaf(c);
    auto att = fuse(tape, {ha, hb, hc}, FusionVariant::attention, leaves, f.params);
    auto mean = fuse(tape, {ha, hb, hc}, FusionVariant::mean, leaves, f.params);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::fabs(tape.value(att).data[i] - tape.value(mean).data[i]) < 1e-12);
    }
}

TEST_CASE("fuse: mlp variant uses the fusion weights") {
    auto cfg = small_config();
    cfg.fusion = FusionVariant::mlp;
    auto f = make_fixture(cfg);
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    Tensor x(2, cfg.d);
    for (std::size_t i = 0; i < x.size(); ++i) x.data[i] = 0.1 * static_cast<double>(i);
    auto hx = tape.leaf(x);
    auto out = fuse(tape, {hx, hx, hx}, FusionVariant::mlp, leaves, f.params);
    CHECK(tape.value(out).rows == 2);
    CHECK(tape.value(out).cols == cfg.d);
}

TEST_CASE("forward: shape contract on the 3x3 grid") {
    auto f = make_fixture(small_config(8, 1, 2));
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    auto state = forward(tape, leaves, f.params, f.graph, f.cfg);
    CHECK(tape.value(state.h_final).rows == 9);
    CHECK(tape.value(state.h_final).cols == 8);
    CHECK(tape.value(state.m_final).rows == 4);
    CHECK(tape.value(state.m_final).cols == 8);
    CHECK(state.h_layers.size() == 2);  // h^(0), h^(1)
    CHECK(state.m_layers.size() == 1);
}

namespace {

// forward under a road permutation applied consistently to ids, positions,
// edges, and incidence; returns (base output, permuted output, pi)
struct PermutationRun {
    Tensor base;
    Tensor permuted;
    std::vector<int> pi;
};

PermutationRun run_permutation(const RoadNetwork& net, const Hypergraph& hg, TrainConfig cfg,
                               const ModelParams& params, int shift) {
    auto graph = ModelGraph::build(net, hg, cfg);
    Tape tape;
    auto leaves = insert_params(tape, params);
    auto state = forward(tape, leaves, params, graph, cfg);

    const int n = static_cast<int>(net.size());
    std::vector<int> pi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pi[static_cast<std::size_t>(i)] = (i + shift) % n;

    RoadNetwork pnet;
    pnet.roads.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pnet.roads[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])] =
            net.roads[static_cast<std::size_t>(i)];
    }
    pnet.ensure_neighbor_table();
    for (int i = 0; i < n; ++i) {
        for (int j : net.neighbors()[static_cast<std::size_t>(i)]) {
            pnet.add_edge(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]);
        }
    }
    Hypergraph phg = hg;
    for (auto& roads : phg.hyperedge_to_roads) {
        for (int& r : roads) r = pi[static_cast<std::size_t>(r)];
        std::sort(roads.begin(), roads.end());
    }
    phg.road_to_hyperedges.assign(static_cast<std::size_t>(n), {});
    for (std::size_t e = 0; e < phg.hyperedge_to_roads.size(); ++e) {
        for (int r : phg.hyperedge_to_roads[e]) {
            phg.road_to_hyperedges[static_cast<std::size_t>(r)].push_back(static_cast<int>(e));
        }
    }
    auto pparams = params;
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < cfg.d; ++c) {
            pparams.id_table.at(pi[static_cast<std::size_t>(i)], c) = params.id_table.at(i, c);
        }
    }
    auto pgraph = ModelGraph::build(pnet, phg, cfg);
    Tape ptape;
    auto pleaves = insert_params(ptape, pparams);
    auto pstate = forward(ptape, pleaves, pparams, pgraph, cfg);
    return {tape.value(state.h_final), ptape.value(pstate.h_final), pi};
}

// C8 cycle with two 4-road hyperedges: every aggregation divides by a power
// of two, so integer parameters keep all intermediates exactly representable
RoadNetwork dyadic_cycle() { return testutil::cycle_graph(8); }

Hypergraph dyadic_hypergraph() {
    Hypergraph hg;
    hg.k = 1;
    hg.hyperedge_to_roads = {{0, 1, 2, 3}, {4, 5, 6, 7}};
    hg.road_to_hyperedges = {{0}, {0}, {0}, {0}, {1}, {1}, {1}, {1}};
    hg.cluster_labels = {0, 0};
    FaceFeatures f;
    f.size = 4;
    f.area = 1.0;
    f.sides = 4;
    hg.features = {f, f};
    return hg;
}

void integer_params(ModelParams& params, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& [name, t] : params.named_tensors()) {
        for (double& v : t->data) v = static_cast<double>(static_cast<int>(rng.bounded(5))) - 2.0;
    }
}

}  // namespace

TEST_CASE("forward: permutation equivariance is exact on dyadic fixtures") {
    // one layer, all three channels: sums are exact, the final /3 rounds the
    // same bit pattern in both runs
    SUBCASE("L = 1 with edge channel") {
        auto cfg = small_config(4, 1, 1);
        cfg.ablation.no_pe = true;
        auto net = dyadic_cycle();
        auto hg = dyadic_hypergraph();
        auto params = init_params(net, hg, cfg);
        integer_params(params, 9);
        const auto run = run_permutation(net, hg, cfg, params, 3);
        for (int i = 0; i < 8; ++i) {
            for (int c = 0; c < cfg.d; ++c) {
                CHECK(run.permuted.at(run.pi[static_cast<std::size_t>(i)], c) == run.base.at(i, c));
            }
        }
    }
    // two layers without the edge channel: every divisor is a power of two,
    // so all intermediates stay dyadic and equality is exact end to end
    SUBCASE("L = 2 under no_dam") {
        auto cfg = small_config(4, 2, 1);
        cfg.ablation.no_pe = true;
        cfg.ablation.no_dam = true;
        auto net = dyadic_cycle();
        auto hg = dyadic_hypergraph();
        auto params = init_params(net, hg, cfg);
        integer_params(params, 10);
        const auto run = run_permutation(net, hg, cfg, params, 5);
        for (int i = 0; i < 8; ++i) {
            for (int c = 0; c < cfg.d; ++c) {
                CHECK(run.permuted.at(run.pi[static_cast<std::size_t>(i)], c) == run.base.at(i, c));
            }
        }
    }
}

TEST_CASE("forward: permutation equivariance within 1e-12 in general") {
    auto cfg = small_config(8, 2, 1);
    auto net = grid_graph(3, 3);
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 1, cfg.seed);
    auto params = init_params(net, hg, cfg);
    cfg.ablation.no_pe = true;
    const auto run = run_permutation(net, hg, cfg, params, 4);
    for (int i = 0; i < 9; ++i) {
        for (int c = 0; c < cfg.d; ++c) {
            CHECK(run.permuted.at(run.pi[static_cast<std::size_t>(i)], c) ==
                  doctest::Approx(run.base.at(i, c)).epsilon(1e-12));
        }
    }
}

TEST_CASE("forward: empty neighborhoods stay finite") {
    auto cfg = small_config(4, 2, 1);
    // isolated road 4 and roads with no hyperedge membership
    auto net = testutil::make_net({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {5, 5}},
                                  {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 1, cfg.seed);
    auto params = init_params(net, hg, cfg);
    auto graph = ModelGraph::build(net, hg, cfg);
    Tape tape;
    auto leaves = insert_params(tape, params);
    auto state = forward(tape, leaves, params, graph, cfg);
    CHECK(tape.value(state.h_final).all_finite());
}

TEST_CASE("forward: two-layer unroll oracle on a 5-node path") {
    // brute-force unroll with plain loops, mean fusion, no hyperedges
    auto cfg = small_config(4, 2, 1);
    cfg.ablation.no_pe = true;
    auto net = testutil::make_net({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}},
                                  {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    Hypergraph hg;
    hg.k = 1;
    hg.road_to_hyperedges.resize(5);
    auto params = init_params(net, hg, cfg);
    auto graph = ModelGraph::build(net, hg, cfg);

    Tape tape;
    auto leaves = insert_params(tape, params);
    auto state = forward(tape, leaves, params, graph, cfg);
    const Tensor& got = tape.value(state.h_final);

    const int d = cfg.d;
    auto matvec = [&](const Tensor& w, const std::vector<double>& x) {
        std::vector<double> y(static_cast<std::size_t>(d), 0.0);
        for (int c = 0; c < d; ++c) {
            for (int t = 0; t < d; ++t) y[static_cast<std::size_t>(c)] += x[static_cast<std::size_t>(t)] * w.at(t, c);
        }
        return y;
    };
    // h0 rows: (q_i || 0) * W_in + b
    std::vector<std::vector<double>> h(5, std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < 5; ++i) {
        for (int c = 0; c < d; ++c) {
            double acc = params.input_b.at(0, c);
            for (int t = 0; t < d; ++t) acc += params.id_table.at(i, t) * params.input_w.at(t, c);
            h[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = acc;
        }
    }
    for (int layer = 0; layer < 2; ++layer) {
        const auto& lw = params.layers[static_cast<std::size_t>(layer)];
        std::vector<std::vector<double>> next(5, std::vector<double>(static_cast<std::size_t>(d)));
        for (int i = 0; i < 5; ++i) {
            const auto& nbrs = net.neighbors()[static_cast<std::size_t>(i)];
            std::vector<double> edge(static_cast<std::size_t>(d), 0.0);
            for (int j : nbrs) {
                const auto tj = matvec(lw.w1, h[static_cast<std::size_t>(j)]);
                for (int c = 0; c < d; ++c) edge[static_cast<std::size_t>(c)] += tj[static_cast<std::size_t>(c)];
            }
            for (int c = 0; c < d; ++c) {
                if (!nbrs.empty()) edge[static_cast<std::size_t>(c)] /= static_cast<double>(nbrs.size());
                edge[static_cast<std::size_t>(c)] = std::max(0.0, edge[static_cast<std::size_t>(c)]);
            }
            // hyperedge channel is all zeros here (no hyperedges)
            for (int c = 0; c < d; ++c) {
                next[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                    (h[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] +
                     edge[static_cast<std::size_t>(c)] + 0.0) /
                    3.0;
            }
        }
        h = next;
    }
    for (int i = 0; i < 5; ++i) {
        for (int c = 0; c < d; ++c) {
            CHECK(got.at(i, c) ==
                  doctest::Approx(h[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)])
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("forward: no_dam uses hyperedge channel and residual only") {
    auto cfg = small_config(4, 1, 1);
    cfg.ablation.no_dam = true;
    auto f = make_fixture(cfg);
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    auto state = forward(tape, leaves, f.params, f.graph, f.cfg);
    // mean over 2 channels: h1 = (h0 + h_hyper) / 2; verify one row by re-deriving
    const Tensor& h0 = tape.value(state.h_layers[0]);
    const Tensor& h1 = tape.value(state.h_layers[1]);
    // roads not in any hyperedge: h1 = h0 / 2 exactly
    for (int i = 0; i < f.graph.n_roads; ++i) {
        if (!(*f.graph.edges_of_road)[static_cast<std::size_t>(i)].empty()) continue;
        for (int c = 0; c < cfg.d; ++c) {
            CHECK(h1.at(i, c) == doctest::Approx(h0.at(i, c) / 2.0));
        }
    }
}

TEST_CASE("init_params: d must divide by 4 and match hypergraph K") {
    auto net = grid_graph(3, 3);
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 2, 1);
    TrainConfig cfg = small_config(6, 1, 2);
    CHECK_THROWS_WITH_AS(init_params(net, hg, cfg), doctest::Contains("divisible by 4"),
                         ConfigError);
    cfg = small_config(8, 1, 3);
    CHECK_THROWS_AS(init_params(net, hg, cfg), ConfigError);  // K mismatch
}

TEST_CASE("relu channel outputs are non-negative") {
    auto f = make_fixture(small_config());
    Tape tape;
    auto leaves = insert_params(tape, f.params);
    auto h0 = input_embedding(tape, leaves, f.params, f.graph, f.cfg);
    auto he = edge_channel(tape, h0, f.graph.neighbor_sets, leaves.of(&f.params.layers[0].w1));
    auto [m, hh] = hyperedge_channel(tape, h0, f.graph.roads_of_edge, f.graph.edges_of_road,
                                     leaves.of(&f.params.layers[0].w2),
                                     leaves.of(&f.params.layers[0].w3));
    for (double v : tape.value(he).data) CHECK(v >= 0.0);
    for (double v : tape.value(m).data) CHECK(v >= 0.0);
    for (double v : tape.value(hh).data) CHECK(v >= 0.0);
}
