#include <sstream>

#include "doctest.h"
#include "hyperroad/errors.hpp"
#include "hyperroad/faces.hpp"
#include "hyperroad/hypergraph.hpp"
#include "hyperroad/roadnet.hpp"
#include "test_util.hpp"

using namespace hyperroad;
using testutil::grid_graph;

TEST_CASE("build_hypergraph: 3x3 grid with k=1") {
    auto net = grid_graph(3, 3);
    auto faces = extract_faces(net);
    Hypergraph hg = build_hypergraph(net, faces, 1, 42);
    CHECK(hg.hyperedge_count() == 4);
    for (int label : hg.cluster_labels) CHECK(label == 0);
    for (const auto& f : hg.features) {
        CHECK(f.size == 4);
        CHECK(f.sides == 4);
        CHECK(f.area > 0.0);
    }
}

TEST_CASE("build_hypergraph: shared road appears in two hyperedges") {
    auto net = grid_graph(2, 3);  // two adjacent squares
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 1, 42);
    REQUIRE(hg.hyperedge_count() == 2);
    // middle-column roads 1 and 4 bound both squares
    CHECK(hg.road_to_hyperedges[1] == std::vector<int>{0, 1});
    CHECK(hg.road_to_hyperedges[4] == std::vector<int>{0, 1});
    CHECK(hg.incident(1, 0));
    CHECK(hg.incident(1, 1));
    CHECK(hg.incidence_count() == 8);
}

TEST_CASE("build_hypergraph: k larger than face count") {
    auto net = grid_graph(3, 3);
    CHECK_THROWS_AS(build_hypergraph(net, extract_faces(net), 5, 42), ConfigError);
}

TEST_CASE("hypergraph: incidence transpose consistency") {
    auto net = grid_graph(5, 5);
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 3, 42);
    // rebuild road_to_hyperedges from hyperedge_to_roads and compare
    std::vector<std::vector<int>> rebuilt(hg.road_count());
    for (std::size_t e = 0; e < hg.hyperedge_count(); ++e) {
        for (int r : hg.hyperedge_to_roads[e]) {
            rebuilt[static_cast<std::size_t>(r)].push_back(static_cast<int>(e));
        }
    }
    for (std::size_t r = 0; r < hg.road_count(); ++r) {
        CHECK(rebuilt[r] == hg.road_to_hyperedges[r]);
    }
    CHECK_NOTHROW(hg.validate());
}

TEST_CASE("cluster_hyperedges: deterministic and degenerate cases") {
    std::vector<FaceFeatures> feats;
    for (int i = 0; i < 12; ++i) {
        FaceFeatures f;
        f.size = 3 + i % 4;
        f.area = 1.0 + i;
        f.sides = 3 + i % 4;
        feats.push_back(f);
    }
    auto l1 = cluster_hyperedges(feats, 3, 7);
    auto l2 = cluster_hyperedges(feats, 3, 7);
    CHECK(l1 == l2);

    auto all_zero = cluster_hyperedges(feats, 1, 7);
    for (int v : all_zero) CHECK(v == 0);

    std::vector<double> history;
    cluster_hyperedges(feats, 3, 7, ClusterFeatures::geometric, &history);
    REQUIRE(!history.empty());
    for (std::size_t t = 1; t < history.size(); ++t) CHECK(history[t] <= history[t - 1] + 1e-9);
}

TEST_CASE("cluster_hyperedges: size_only uses one feature") {
    std::vector<FaceFeatures> feats;
    for (int i = 0; i < 6; ++i) {
        FaceFeatures f;
        f.size = i < 3 ? 3 : 30;
        f.area = 1.0;  // identical; only size can separate
        f.sides = 4;
        feats.push_back(f);
    }
    auto labels = cluster_hyperedges(feats, 2, 5, ClusterFeatures::size_only);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[1] == labels[2]);
    CHECK(labels[3] == labels[4]);
    CHECK(labels[4] == labels[5]);
    CHECK(labels[0] != labels[3]);
}

TEST_CASE("hypergraph JSON round trip") {
    auto net = grid_graph(4, 4);
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 2, 42);
    std::ostringstream out;
    save_hypergraph(hg, out);
    std::istringstream in(out.str());
    Hypergraph again = load_hypergraph(in, net.size());
    CHECK(again.k == hg.k);
    CHECK(again.hyperedge_to_roads == hg.hyperedge_to_roads);
    CHECK(again.road_to_hyperedges == hg.road_to_hyperedges);
    CHECK(again.cluster_labels == hg.cluster_labels);
    for (std::size_t e = 0; e < hg.hyperedge_count(); ++e) {
        CHECK(again.features[e].size == hg.features[e].size);
        CHECK(again.features[e].area == doctest::Approx(hg.features[e].area));
        CHECK(again.features[e].sides == hg.features[e].sides);
    }
}

TEST_CASE("load_hypergraph rejects out-of-range roads") {
    auto net = grid_graph(3, 3);
    Hypergraph hg = build_hypergraph(net, extract_faces(net), 1, 42);
    std::ostringstream out;
    save_hypergraph(hg, out);
    std::istringstream in(out.str());
    CHECK_THROWS_AS(load_hypergraph(in, 2), FileError);  // too few roads declared
}

TEST_CASE("build_hypergraph at the corpus hyperedge scale") {
    // 47x83 intersections -> exactly 3,772 bounded cells, the real corpus count
    auto net = grid_graph(47, 83);
    auto faces = extract_faces(net);
    REQUIRE(faces.size() == 3772);
    Hypergraph hg = build_hypergraph(net, faces, 8, 42);
    CHECK(hg.hyperedge_count() == 3772);
}
