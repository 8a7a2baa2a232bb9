#include <sstream>

#include "doctest.h"
#include "hyperroad/errors.hpp"
#include "hyperroad/roadnet.hpp"
#include "test_util.hpp"

using namespace hyperroad;

TEST_CASE("load_network: minimal two-node graph") {
    std::istringstream nodes("id,lon,lat\na,0,0\nb,1,0\n");
    std::istringstream edges("src,dst\na,b\n");
    RoadNetwork net = load_network(nodes, edges);
    CHECK(net.size() == 2);
    CHECK(net.edge_count() == 1);
    CHECK(net.out_neighbors(0) == std::vector<int>{1});
    CHECK(net.out_neighbors(1).empty());
    CHECK(net.roads[0].id == "a");
}

TEST_CASE("load_network: errors carry file and line context") {
    SUBCASE("duplicate node id") {
        std::istringstream nodes("id,lon,lat\na,0,0\na,1,0\n");
        std::istringstream edges("src,dst\n");
        CHECK_THROWS_WITH_AS(load_network(nodes, edges),
                             doctest::Contains("line 3"), FileError);
    }
    SUBCASE("unknown edge endpoint") {
        std::istringstream nodes("id,lon,lat\na,0,0\nb,1,0\n");
        std::istringstream edges("src,dst\na,zz\n");
        CHECK_THROWS_WITH_AS(load_network(nodes, edges), doctest::Contains("unknown node id"),
                             FileError);
    }
    SUBCASE("self-loop") {
        std::istringstream nodes("id,lon,lat\na,0,0\nb,1,0\n");
        std::istringstream edges("src,dst\nb,a\na,a\n");
        CHECK_THROWS_WITH_AS(load_network(nodes, edges), doctest::Contains("self-loop at line 3"),
                             FileError);
    }
    SUBCASE("non-finite coordinate") {
        std::istringstream nodes("id,lon,lat\na,inf,0\n");
        std::istringstream edges("src,dst\n");
        CHECK_THROWS_AS(load_network(nodes, edges), FileError);
    }
    SUBCASE("attribute outside declared cardinality") {
        AttributeSchema schema;
        schema.names = {"lanes"};
        schema.cardinalities = {3};
        std::istringstream nodes("id,lon,lat,lanes\na,0,0,7\n");
        std::istringstream edges("src,dst\n");
        CHECK_THROWS_WITH_AS(load_network(nodes, edges, schema), doctest::Contains("outside"),
                             FileError);
    }
    SUBCASE("duplicate edge") {
        std::istringstream nodes("id,lon,lat\na,0,0\nb,1,0\n");
        std::istringstream edges("src,dst\na,b\na,b\n");
        CHECK_THROWS_WITH_AS(load_network(nodes, edges), doctest::Contains("duplicate edge"),
                             FileError);
    }
}

TEST_CASE("load_network: missing attribute values allowed") {
    AttributeSchema schema;
    schema.names = {"lanes", "oneway"};
    schema.cardinalities = {6, 2};
    std::istringstream nodes("id,lon,lat,lanes,oneway\na,0,0,,1\nb,1,0,3,\n");
    std::istringstream edges("src,dst\n");
    RoadNetwork net = load_network(nodes, edges, schema);
    CHECK(net.roads[0].attributes == std::vector<int>{kMissingAttr, 1});
    CHECK(net.roads[1].attributes == std::vector<int>{3, kMissingAttr});
}

TEST_CASE("save/load round trip is bit exact") {
    AttributeSchema schema;
    schema.names = {"lanes"};
    schema.cardinalities = {4};
    std::istringstream nodes("id,lon,lat,lanes\na,0.25,-1.5,2\nb,103.81234567891234,1.3522,\nc,2,3,0\n");
    std::istringstream edges("src,dst\na,b\nc,a\nc,b\n");
    RoadNetwork net = load_network(nodes, edges, schema);

    std::ostringstream nodes_out, edges_out;
    save_network(net, nodes_out, edges_out);
    std::istringstream nodes_in(nodes_out.str()), edges_in(edges_out.str());
    RoadNetwork again = load_network(nodes_in, edges_in, schema);

    std::ostringstream nodes_out2, edges_out2;
    save_network(again, nodes_out2, edges_out2);
    CHECK(nodes_out.str() == nodes_out2.str());
    CHECK(edges_out.str() == edges_out2.str());
    CHECK(again.size() == net.size());
    CHECK(again.edge_count() == net.edge_count());
    for (std::size_t i = 0; i < net.size(); ++i) {
        CHECK(again.roads[i].id == net.roads[i].id);
        CHECK(again.roads[i].lon == net.roads[i].lon);
        CHECK(again.roads[i].attributes == net.roads[i].attributes);
    }
}

TEST_CASE("symmetrize_neighbors") {
    SUBCASE("single directed edge gains its reverse") {
        auto net = testutil::make_net({{0, 0}, {1, 0}}, {{0, 1}}, false);
        RoadNetwork sym = symmetrize_neighbors(net);
        CHECK(sym.edge_count() == 2);
        CHECK(sym.has_edge(0, 1));
        CHECK(sym.has_edge(1, 0));
    }
    SUBCASE("idempotent on symmetric networks") {
        auto net = testutil::grid_graph(3, 3);
        RoadNetwork once = symmetrize_neighbors(net);
        RoadNetwork twice = symmetrize_neighbors(once);
        CHECK(once.edge_count() == twice.edge_count());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once.neighbors()[i] == twice.neighbors()[i]);
        }
    }
    SUBCASE("star K_{1,3} directed outward gains all 6 directed pairs") {
        auto net = testutil::make_net({{0, 0}, {1, 0}, {0, 1}, {-1, 0}},
                                      {{0, 1}, {0, 2}, {0, 3}}, false);
        RoadNetwork sym = symmetrize_neighbors(net);
        // enumerated by hand: center<->each leaf, both directions
        CHECK(sym.edge_count() == 6);
        for (int leaf : {1, 2, 3}) {
            CHECK(sym.has_edge(0, leaf));
            CHECK(sym.has_edge(leaf, 0));
        }
        CHECK(sym.out_neighbors(0) == std::vector<int>{1, 2, 3});
    }
    SUBCASE("never removes edges") {
        auto net = testutil::make_net({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}, false);
        RoadNetwork sym = symmetrize_neighbors(net);
        CHECK(sym.has_edge(0, 1));
        CHECK(sym.has_edge(1, 2));
        CHECK(sym.edge_count() == 4);
    }
}

TEST_CASE("adjacency_row") {
    SUBCASE("directed path vs symmetrized path") {
        auto path = testutil::make_net({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {1, 2}}, false);
        CHECK(adjacency_row(path, 1) == std::vector<int>{2});
        RoadNetwork sym = symmetrize_neighbors(path);
        CHECK(adjacency_row(sym, 1) == std::vector<int>{0, 2});
    }
    SUBCASE("isolated node") {
        auto net = testutil::make_net({{0, 0}, {1, 0}}, {});
        CHECK(adjacency_row(net, 0).empty());
    }
    SUBCASE("grid center has exactly the 4 lattice neighbors") {
        // 3x3 grid graph, center node 4: enumerated neighbors 1, 3, 5, 7
        auto net = testutil::grid_graph(3, 3);
        CHECK(adjacency_row(net, 4) == std::vector<int>{1, 3, 5, 7});
    }
    SUBCASE("index out of range") {
        auto net = testutil::make_net({{0, 0}}, {});
        CHECK_THROWS_AS(adjacency_row(net, 5), ConfigError);
        CHECK_THROWS_AS(adjacency_row(net, -1), ConfigError);
    }
}

TEST_CASE("edge count equals sum of neighbor list sizes") {
    auto net = testutil::grid_graph(4, 5);
    std::size_t total = 0;
    for (std::size_t i = 0; i < net.size(); ++i) total += net.neighbors()[i].size();
    CHECK(total == net.edge_count());
    CHECK(directed_edge_list(net).size() == net.edge_count());
}

TEST_CASE("loader accepts a network at the Singapore scale") {
    // synthetic file with the real corpus row counts: 33,948 roads and
    // 147,550 directed edges
    const int n = 33948;
    const int target_edges = 147550;
    std::ostringstream nodes, edges;
    nodes << "id,lon,lat\n";
    for (int i = 0; i < n; ++i) {
        nodes << 'n' << i << ',' << (103.6 + 1e-5 * (i % 2000)) << ',' << (1.2 + 1e-5 * (i / 2000))
              << '\n';
    }
    edges << "src,dst\n";
    int written = 0;
    for (int stride : {1, 2, 3, 5, 7}) {
        for (int i = 0; i < n && written < target_edges; ++i) {
            const int j = (i + stride) % n;
            edges << 'n' << i << ",n" << j << '\n';
            ++written;
        }
    }
    REQUIRE(written == target_edges);
    std::istringstream nodes_in(nodes.str()), edges_in(edges.str());
    RoadNetwork net = load_network(nodes_in, edges_in);
    CHECK(net.size() == 33948);
    CHECK(net.edge_count() == 147550);
}

TEST_CASE("schema JSON round trip") {
    AttributeSchema schema;
    schema.names = {"road_type", "speed"};
    schema.cardinalities = {5, 6};
    std::ostringstream out;
    save_schema(schema, out);
    std::istringstream in(out.str());
    AttributeSchema again = load_schema(in);
    CHECK(again.names == schema.names);
    CHECK(again.cardinalities == schema.cardinalities);
}

TEST_CASE("schema rejects cardinality below 2") {
    AttributeSchema schema;
    schema.names = {"flag"};
    schema.cardinalities = {1};
    CHECK_THROWS_AS(schema.validate(), ConfigError);
}
